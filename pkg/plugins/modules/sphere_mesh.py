#!/usr/bin/python
# -*- coding: utf-8 -*-

"""
Ansible module for exporting random unit-sphere triangulations.
"""

from __future__ import absolute_import, division, print_function
__metaclass__ = type

DOCUMENTATION = r'''
---
module: sphere_mesh
short_description: Write the convex-hull triangulation of random sphere samples
version_added: "0.1.0"
description:
    - Samples I(points) uniform points on the unit sphere from I(seed),
      triangulates them by their convex hull and writes an OFF or OBJ file.
    - The output is byte-identical for equal inputs, so the file is only
      rewritten when its content would change.
options:
    points:
        description: Number of sphere samples (at least 4)
        required: true
        type: int
    seed:
        description: RNG seed
        type: int
        default: 0
    dest:
        description: Target file (.off or .obj)
        required: true
        type: path
    format:
        description: Mesh format; inferred from the extension when omitted
        type: str
        choices: ['obj', 'off']
author:
    - Jack (@jackaltx)
'''

EXAMPLES = r'''
- name: Sphere with 400 vertices
  jackaltx.solti_curvature.sphere_mesh:
    points: 400
    seed: 7
    dest: /tmp/curvature/sphere400.off
'''

RETURN = r'''
vertex_count:
    description: Number of hull vertices
    type: int
    returned: always
face_count:
    description: Number of hull triangles (2V - 4)
    type: int
    returned: always
edge_count:
    description: Number of hull edges (3V - 6)
    type: int
    returned: always
average_edge_length:
    description: Mean edge length (eta)
    type: float
    returned: always
sha256:
    description: Digest of the rendered mesh file
    type: str
    returned: always
'''

from ansible.module_utils.basic import AnsibleModule

try:
    from ansible_collections.jackaltx.solti_curvature.plugins.module_utils.bench import sync_file
    from ansible_collections.jackaltx.solti_curvature.plugins.module_utils.curvature_errors import CurvatureError
    from ansible_collections.jackaltx.solti_curvature.plugins.module_utils.mesh_io import (
        MeshFormat,
        format_obj,
        format_off,
    )
    from ansible_collections.jackaltx.solti_curvature.plugins.module_utils.sphere_hull import (
        average_edge_length,
        sphere_mesh,
    )
except ImportError:
    # Fallback for local development
    from plugins.module_utils.bench import sync_file
    from plugins.module_utils.curvature_errors import CurvatureError
    from plugins.module_utils.mesh_io import MeshFormat, format_obj, format_off
    from plugins.module_utils.sphere_hull import average_edge_length, sphere_mesh


def run_module():
    module_args = dict(
        points=dict(type='int', required=True),
        seed=dict(type='int', default=0),
        dest=dict(type='path', required=True),
        format=dict(type='str', choices=['obj', 'off']),
    )

    result = dict(
        changed=False,
    )

    module = AnsibleModule(
        argument_spec=module_args,
        supports_check_mode=True
    )

    if module.params['points'] < 4:
        module.fail_json(msg=f"points must be >= 4, got {module.params['points']}", **result)

    dest = module.params['dest']
    try:
        fmt = MeshFormat(module.params['format']) if module.params['format'] else MeshFormat.from_path(dest)
        _, mesh = sphere_mesh(module.params['points'], module.params['seed'], log=module)
    except CurvatureError as e:
        module.fail_json(msg=f"Failed to build sphere mesh: {e}", dest=dest, **result)

    text = format_obj(mesh) if fmt is MeshFormat.OBJ else format_off(mesh)
    changed, digest = sync_file(dest, text, module.check_mode)

    result.update(
        changed=changed,
        dest=dest,
        sha256=digest,
        vertex_count=mesh.vertex_count,
        face_count=mesh.face_count,
        edge_count=mesh.edge_count,
        average_edge_length=average_edge_length(mesh),
    )
    module.exit_json(**result)


def main():
    run_module()


if __name__ == '__main__':
    main()
