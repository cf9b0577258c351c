"""Acceptance gate: one test per shipped claim, at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
check; ``treedim verify all`` prints the same checks as a table.
"""

import pytest

from treedim import verify


def report(results):
    lines = []
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        line = f"{mark} {r.name}: expected {r.expected}; observed {r.observed}"
        print(line)
        lines.append((r.passed, line))
    failed = [line for ok, line in lines if not ok]
    assert not failed, "\n".join(failed)


def test_criterion_1_closed_form_constants():
    report(verify.criterion_closed_forms())


def test_criterion_2_constants_grid():
    report(verify.criterion_constants_grid())


def test_criterion_3_internal_consistency():
    report(verify.criterion_internal_consistency())


def test_criterion_4_slater_oracle_equivalence():
    report(verify.criterion_slater_oracle())


def test_criterion_5_decomposition_audit():
    report(verify.criterion_epsilon_audit())


def test_criterion_6_mean_md_matches_constants():
    report(verify.criterion_figure1())


def test_criterion_7_embedding_total_variation():
    report(verify.criterion_embedding_tv())


def test_criterion_8_increasing_rate_clock_tail():
    report(verify.criterion_h_tail())


def test_criterion_9_fringe_size_and_leaf_laws():
    report(verify.criterion_fringe_laws())


def test_criterion_10_conditional_probability_oracles():
    report(verify.criterion_conditional_oracles())
