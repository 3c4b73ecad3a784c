"""Python interface to the conformable-symmetry toolkit.

The heavy lifting happens in the compiled extension; this package decodes its
JSON reports into dictionaries.
"""

import json

from _confsym import (  # noqa: F401
    conf_diff,
    conf_diff_value,
    conf_integrate_value,
    diff,
    evaluate,
    parse,
    simplify,
    zero_test,
)
import _confsym as _core

__all__ = [
    "parse",
    "simplify",
    "diff",
    "evaluate",
    "zero_test",
    "conf_diff",
    "conf_diff_value",
    "conf_integrate_value",
    "check_rules",
    "symmetries",
    "commutators",
    "pipelines",
    "reduce_check",
    "lift_residual",
    "run_suite",
]


def check_rules(alpha):
    return json.loads(_core.check_rules_json(alpha))


def symmetries(equation, alpha, beta, points=50, seed=0xC0FFEE):
    return json.loads(_core.symmetries_json(equation, alpha, beta, points, seed))


def commutators(equation, seed=0xC0FFEE):
    return json.loads(_core.commutators_json(equation, seed))


def pipelines():
    return list(_core.pipelines())


def reduce_check(pipeline, alpha, beta, seed=0xC0FFEE):
    return json.loads(_core.reduce_check_json(pipeline, alpha, beta, seed))


def lift_residual(pipeline, grid_n=25, tolerance=1e-6):
    return json.loads(_core.lift_residual_json(pipeline, grid_n, tolerance))


def run_suite(grid_n=25, seed=0xC0FFEE):
    return json.loads(_core.suite_json(grid_n, seed))
