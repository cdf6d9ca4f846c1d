"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from supercurve.scalars import QSeries
from supercurve.superfield import ONE, PHI, THETA, THETA_PHI, SuperField

ZORDER, QORDER = 6, 3

_qseries = st.builds(
    lambda rows: QSeries(rows, QORDER),
    st.dictionaries(st.integers(-2, 2),
                    st.lists(st.integers(-4, 4), min_size=1, max_size=QORDER + 1),
                    min_size=1, max_size=2),
)


def fields(parity=None, zmin=-3, zmax=3):
    """Random superfields; ``parity`` restricts to even or odd monomials."""
    monos = {None: [ONE, THETA, PHI, THETA_PHI], "even": [ONE, THETA_PHI],
             "odd": [THETA, PHI]}[parity]
    keys = st.tuples(st.integers(zmin, zmax), st.sampled_from(monos))
    return st.dictionaries(keys, _qseries, max_size=4).map(
        lambda t: SuperField(t, ZORDER, QORDER))


homogeneous = st.sampled_from(["even", "odd"]).flatmap(
    lambda p: fields(p).map(lambda f: (f, 0 if p == "even" else 1)))
