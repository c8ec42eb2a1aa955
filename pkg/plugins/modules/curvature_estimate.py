#!/usr/bin/python
# -*- coding: utf-8 -*-

"""
Ansible module for per-vertex discrete curvature of a triangle mesh.
"""

from __future__ import absolute_import, division, print_function
__metaclass__ = type

DOCUMENTATION = r'''
---
module: curvature_estimate
short_description: Evaluate discrete curvature schemes on an OBJ/OFF mesh
version_added: "0.1.0"
description:
    - Reads a triangle mesh and evaluates the angular-defect Gaussian curvature
      schemes G1..G5 and the cotangent mean curvature H1 at every vertex.
    - Boundary, non-manifold, degenerate and ill-conditioned vertices are
      flagged, never dropped.
    - Read-only; never reports changed.
options:
    mesh:
        description: Path to an .obj or .off triangle mesh
        required: true
        type: path
    format:
        description: Mesh format; inferred from the extension when omitted
        type: str
        choices: ['obj', 'off']
    schemes:
        description: Schemes to evaluate
        type: list
        elements: str
        choices: ['G1', 'G2', 'G3', 'G4', 'G5', 'H1']
        default: ['G1', 'G2', 'G3', 'G4', 'G5', 'H1']
    voronoi_rule:
        description: Area rule used by G4
        type: str
        choices: ['mixed', 'circumcentric']
        default: mixed
    principal:
        description: Add k_min/k_max per vertex (needs H1 and G5)
        type: bool
        default: false
    reference_gaussian:
        description: Known Gaussian curvature; adds the mean absolute error per Gaussian scheme
        type: float
    reference_mean:
        description: Known (unsigned) mean curvature; adds the mean absolute error of H1
        type: float
    include_vertices:
        description: Return the per-vertex rows, not only the summary
        type: bool
        default: false
author:
    - Jack (@jackaltx)
'''

EXAMPLES = r'''
- name: Curvature summary of a unit sphere mesh
  jackaltx.solti_curvature.curvature_estimate:
    mesh: /tmp/sphere400.off
    reference_gaussian: 1.0
    reference_mean: 1.0
  register: sphere_curvature

- name: Per-vertex values with principal curvatures
  jackaltx.solti_curvature.curvature_estimate:
    mesh: "{{ playbook_dir }}/files/part.obj"
    schemes: [G2, G5, H1]
    principal: true
    include_vertices: true
  register: part_curvature
'''

RETURN = r'''
vertex_count:
    description: Number of mesh vertices
    type: int
    returned: always
face_count:
    description: Number of triangles
    type: int
    returned: always
euler_characteristic:
    description: V - E + F
    type: int
    returned: always
flags:
    description: Per-scheme count of vertex flags
    type: dict
    returned: always
    sample:
        G5: {ok: 396, ill_conditioned: 4}
mean_abs_error:
    description: Per-scheme mean absolute error over vertices flagged ok
    type: dict
    returned: when reference_gaussian or reference_mean is set
vertices:
    description: Per-vertex rows (vertex, scheme values, flags, optional k_min/k_max)
    type: list
    returned: when include_vertices is true
'''

from ansible.module_utils.basic import AnsibleModule

try:
    from ansible_collections.jackaltx.solti_curvature.plugins.module_utils.curvature_errors import CurvatureError
    from ansible_collections.jackaltx.solti_curvature.plugins.module_utils.curvature_schemes import (
        estimate_mesh,
        parse_schemes,
    )
    from ansible_collections.jackaltx.solti_curvature.plugins.module_utils.mesh_io import read_mesh
except ImportError:
    # Fallback for local development
    from plugins.module_utils.curvature_errors import CurvatureError
    from plugins.module_utils.curvature_schemes import estimate_mesh, parse_schemes
    from plugins.module_utils.mesh_io import read_mesh


def run_module():
    module_args = dict(
        mesh=dict(type='path', required=True),
        format=dict(type='str', choices=['obj', 'off']),
        schemes=dict(
            type='list',
            elements='str',
            default=['G1', 'G2', 'G3', 'G4', 'G5', 'H1'],
            choices=['G1', 'G2', 'G3', 'G4', 'G5', 'H1']
        ),
        voronoi_rule=dict(type='str', default='mixed', choices=['mixed', 'circumcentric']),
        principal=dict(type='bool', default=False),
        reference_gaussian=dict(type='float'),
        reference_mean=dict(type='float'),
        include_vertices=dict(type='bool', default=False),
    )

    result = dict(
        changed=False,
    )

    module = AnsibleModule(
        argument_spec=module_args,
        supports_check_mode=True
    )

    try:
        mesh = read_mesh(module.params['mesh'], module.params['format'])
        report = estimate_mesh(
            mesh,
            parse_schemes(module.params['schemes']),
            module.params['voronoi_rule'],
            log=module,
        )
    except CurvatureError as e:
        module.fail_json(msg=f"Failed to estimate curvature: {e}", mesh=module.params['mesh'], **result)

    result['vertex_count'] = mesh.vertex_count
    result['face_count'] = mesh.face_count
    result['euler_characteristic'] = mesh.euler_characteristic
    result['flags'] = {s.value: dict(report.flag_counts(s)) for s in report.schemes}

    errors = {}
    for scheme in report.schemes:
        truth = module.params['reference_gaussian'] if scheme.is_gaussian else module.params['reference_mean']
        if truth is None:
            continue
        mean, used = report.mean_abs_error(scheme, truth)
        if not used:
            module.warn(f"{scheme.value}: no vertex flagged ok, mean error undefined")
        errors[scheme.value] = mean if used else None
    if errors:
        result['mean_abs_error'] = errors

    if module.params['include_vertices']:
        result['vertices'] = report.as_rows(principal=module.params['principal'])

    module.exit_json(**result)


def main():
    run_module()


if __name__ == '__main__':
    main()
