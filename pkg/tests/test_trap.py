"""The dyadic two-generator approximation of stickiness.

With the deep down generator the barrier no longer equals the running
minimum exactly, but the defect stays within the trap depth; at depth 1
the model must collapse to the fully sticky flow.
"""

from fractions import Fraction

import pytest

from signflows.errors import InvalidParameter
from signflows import flow


class TestTrapLaw:
    """State DP == pathwise recurrence over every sign path."""

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_dp_equals_paths(self, m):
        for t in range(1, 9):
            assert flow.trap_model_law(t, m) == flow.trap_law_by_paths(t, m)

    def test_depth_one_is_fully_sticky(self):
        sticky = flow.standard_generators("g3", p=Fraction(1))
        for t in range(1, 8):
            assert flow.trap_model_law(t, 1).probs == \
                flow.flow_law(sticky, t).probs

    def test_depth_two_is_not_fully_sticky(self):
        sticky = flow.standard_generators("g3", p=Fraction(1))
        assert flow.trap_model_law(6, 2).probs != flow.flow_law(sticky, 6).probs

    def test_total_mass(self):
        law = flow.trap_model_law(9, 2)
        assert law.total_mass() == 1

    def test_depth_validated(self):
        with pytest.raises(InvalidParameter):
            flow.trap_model_law(4, 0)


class TestTrapDefect:
    """|barrier + running minimum| never exceeds the depth."""

    @pytest.mark.parametrize("m", [2, 3])
    def test_exhaustive(self, m):
        for t in (6, 10):
            defect = flow.identity_defect_exhaustive(t, model="trap", m=m)
            assert defect <= m

    def test_defect_positive_for_deep_traps(self):
        # the bound is not vacuous: some path at m=3 pushes the barrier
        # strictly past the running minimum
        assert flow.identity_defect_exhaustive(8, model="trap", m=3) > 0

    def test_depth_required(self):
        with pytest.raises(InvalidParameter):
            flow.identity_defect_exhaustive(6, model="trap")


class TestTrapReport:
    """Bundled diagnostics stay green."""

    def test_report(self):
        rep = flow.trap_report(8, 2)
        assert rep.passed
        ids = {c.check_id for c in rep.checks}
        assert "depth1_matches_fully_sticky" in ids
        assert "dp_law_equals_path_enumeration" in ids
