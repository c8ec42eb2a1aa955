#!/usr/bin/python
# -*- coding: utf-8 -*-

"""
Ansible module for running a curvature convergence experiment.
"""

from __future__ import absolute_import, division, print_function
__metaclass__ = type

DOCUMENTATION = r'''
---
module: curvature_experiment
short_description: Run a Table1/Table2/parallelogram/counterexample experiment
version_added: "0.1.0"
description:
    - Runs one convergence experiment and returns its rows.
    - Options mirror the keys of an experiment YAML file; options given here
      override the values read from I(config_file).
    - When I(dest) is set the CSV/JSON report is written there, only if its
      content changed (reports are byte-stable for a fixed configuration).
options:
    kind:
        description: Experiment to run; required unless config_file sets it
        type: str
        choices: ['table1', 'table2', 'parallelogram', 'counterexample']
    config_file:
        description: YAML experiment file
        type: path
    valences:
        description: Valences for table1
        type: list
        elements: int
    levels:
        description: Decreasing refinement levels; numbers or fractions like "1/8"
        type: list
        elements: str
    samples:
        description: Random quadratic graphs per valence (M)
        type: int
    sphere_sizes:
        description: Sphere point counts for table2
        type: list
        elements: int
    seed:
        description: Root seed
        type: int
    schemes:
        description: Schemes to evaluate
        type: list
        elements: str
    output_format:
        description: Report format
        type: str
        choices: ['csv', 'json']
    voronoi_rule:
        description: Area rule used by G4
        type: str
        choices: ['mixed', 'circumcentric']
    counterexample_values:
        description: c values for the counterexample
        type: list
        elements: float
    surfaces:
        description: Built-in surfaces for the parallelogram experiment
        type: list
        elements: str
    dest:
        description: Where to write the rendered report
        type: path
author:
    - Jack (@jackaltx)
'''

EXAMPLES = r'''
- name: Regular-fan orders for valences 4..8
  jackaltx.solti_curvature.curvature_experiment:
    kind: table1
    valences: [4, 5, 6, 7, 8]
    levels: ["1/8", "1/16", "1/32", "1/64", "1/128"]
    samples: 100
    seed: 20240601
    dest: /tmp/curvature/table1.csv

- name: Experiment driven from a config file, JSON report
  jackaltx.solti_curvature.curvature_experiment:
    config_file: "{{ playbook_dir }}/experiments/table2.yml"
    output_format: json
    dest: /tmp/curvature/table2.json
  register: table2
'''

RETURN = r'''
config:
    description: The effective experiment configuration
    type: dict
    returned: always
rows:
    description: Report rows (the JSON rendering, decoded)
    type: list
    returned: always
coordinates_identical:
    description: Whether counterexample fans matched bit for bit across c
    type: bool
    returned: when kind is counterexample
irreducible_error:
    description: Per-scheme max over c of |limit - (4 - c^2)|
    type: dict
    returned: when kind is counterexample
dest:
    description: Path of the written report
    type: str
    returned: when dest is set
sha256:
    description: Digest of the rendered report
    type: str
    returned: when dest is set
'''

import json

from ansible.module_utils.basic import AnsibleModule

try:
    from ansible_collections.jackaltx.solti_curvature.plugins.module_utils.bench import (
        render_report,
        run_experiment,
        sync_file,
    )
    from ansible_collections.jackaltx.solti_curvature.plugins.module_utils.curvature_errors import (
        ConfigError,
        CurvatureError,
    )
    from ansible_collections.jackaltx.solti_curvature.plugins.module_utils.experiment_config import (
        build_config,
        load_config,
    )
except ImportError:
    # Fallback for local development
    from plugins.module_utils.bench import render_report, run_experiment, sync_file
    from plugins.module_utils.curvature_errors import ConfigError, CurvatureError
    from plugins.module_utils.experiment_config import build_config, load_config

CONFIG_KEYS = (
    'kind', 'valences', 'levels', 'samples', 'sphere_sizes', 'seed', 'schemes',
    'output_format', 'voronoi_rule', 'counterexample_values', 'surfaces',
)


def effective_config(params):
    """Config file values overlaid with the module options that were set."""
    data = {}
    if params['config_file']:
        data = load_config(params['config_file']).to_dict()
    data.update({k: params[k] for k in CONFIG_KEYS if params[k] is not None})
    if 'kind' not in data:
        raise ConfigError("kind is required when config_file is not given", ["<root>: 'kind' is a required property"])
    return build_config(data)


def run_module():
    module_args = dict(
        kind=dict(type='str', choices=['table1', 'table2', 'parallelogram', 'counterexample']),
        config_file=dict(type='path'),
        valences=dict(type='list', elements='int'),
        levels=dict(type='list', elements='str'),
        samples=dict(type='int'),
        sphere_sizes=dict(type='list', elements='int'),
        seed=dict(type='int'),
        schemes=dict(type='list', elements='str'),
        output_format=dict(type='str', choices=['csv', 'json']),
        voronoi_rule=dict(type='str', choices=['mixed', 'circumcentric']),
        counterexample_values=dict(type='list', elements='float'),
        surfaces=dict(type='list', elements='str'),
        dest=dict(type='path'),
    )

    result = dict(
        changed=False,
    )

    module = AnsibleModule(
        argument_spec=module_args,
        supports_check_mode=True
    )

    try:
        cfg = effective_config(module.params)
    except ConfigError as e:
        module.fail_json(msg=str(e), problems=e.problems, **result)

    result['config'] = cfg.to_dict()

    try:
        report = run_experiment(cfg, log=module)
    except CurvatureError as e:
        module.fail_json(msg=f"Experiment {cfg.kind.value} failed: {e}", **result)

    decoded = json.loads(report.to_json())
    result['rows'] = decoded['rows']
    if 'irreducible_error' in decoded:
        result['coordinates_identical'] = decoded['coordinates_identical']
        result['irreducible_error'] = decoded['irreducible_error']

    dest = module.params['dest']
    if dest:
        changed, digest = sync_file(dest, render_report(report, cfg.output_format), module.check_mode)
        result['changed'] = changed
        result['dest'] = dest
        result['sha256'] = digest

    module.exit_json(**result)


def main():
    run_module()


if __name__ == '__main__':
    main()
