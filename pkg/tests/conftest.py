"""Shared test plumbing: the acceptance-criteria summary.

Every test in test_acceptance.py is one acceptance criterion; after the
run, one PASS/FAIL line per criterion is appended to the terminal report.
"""

CRITERIA = {
    "test_existence_uniqueness_recursion_vs_oracle": (
        "existence/uniqueness: recursion states match the eigensolver oracle "
        "(residual <= 1e-9, overlap >= 1-1e-9, 6 spins x 100 directions, <= 60s)"
    ),
    "test_spin_algebra_commutators_and_casimir": (
        "spin algebra: commutator defects <= 1e-11 and Casimir defects <= 1e-10 "
        "for all tested spins"
    ),
    "test_per_direction_completeness": (
        "per-direction completeness: every answer catalog has Gram matrix "
        "within 1e-9 of identity"
    ),
    "test_bloch_round_trip_and_cover_map": (
        "two-level geometry: 1000 round trips with overlap >= 1-1e-9, cover-map "
        "products within 1e-10 on 500 pairs, kernel within 1e-12"
    ),
    "test_ray_collisions_two_to_one_and_distinctness": (
        "ray collisions: antipodal (direction, answer) pairs coincide, separated "
        "pairs stay distinct, recorded in the golden battery"
    ),
    "test_coarse_graining_projector_identities": (
        "coarse graining: 50 random specs (d <= 8), projector identities within "
        "1e-11/1e-10, maximality equals injectivity"
    ),
    "test_finite_model_machinery": (
        "finite models: closure vs brute force, pointwise relabeling, unitary "
        "stable representation, multiplicative word images, designed-failure "
        "verdicts, reducibility finding (<= 30s)"
    ),
    "test_determinism_byte_identical_reports": (
        "determinism: same seed reproduces the verification battery byte for byte"
    ),
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if getattr(report, "when", None) not in ("call", "setup"):
                continue
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if status == "passed" and outcomes.get(name) == "FAIL":
                continue
            outcomes[name] = "PASS" if status == "passed" else "FAIL"
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, label in CRITERIA.items():
        if name in outcomes:
            terminalreporter.write_line(f"{outcomes[name]}  {label}")
    for name in sorted(set(outcomes) - set(CRITERIA)):
        terminalreporter.write_line(f"{outcomes[name]}  {name}")
