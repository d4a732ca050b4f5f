import numpy as np
from hypothesis import strategies as st

transmissions = st.floats(min_value=0.02, max_value=0.98, allow_nan=False)
pass_numbers = st.floats(min_value=0.25, max_value=8.0, allow_nan=False)
phases = st.floats(min_value=-np.pi, max_value=np.pi, allow_nan=False)
