"""Hypothesis strategies for admissible states and unit normals."""

import numpy as np
from hypothesis import strategies as st

from swebc.core import State, UnitNormal

phis = st.floats(0.1, 10.0)
speeds = st.floats(-5.0, 5.0)
angles = st.floats(0.0, 2.0 * np.pi)
gravities = st.sampled_from([1.0, 9.81, 0.5])


@st.composite
def states(draw):
    return State(draw(phis), draw(speeds), draw(speeds))


@st.composite
def normals(draw):
    a = draw(angles)
    return UnitNormal(np.cos(a), np.sin(a))
