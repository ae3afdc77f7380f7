from hypothesis import strategies as st

from epimatch.model import ModelParams

# filled by the acceptance tests, printed in the terminal summary
ACCEPTANCE_LINES = []


@st.composite
def economies(draw):
    aH = draw(st.floats(0.05, 0.95))
    YL = draw(st.floats(0.0, 0.5))
    YH = draw(st.floats(YL + 0.05, 1.0))
    tL = draw(st.floats(0.05, 1.0))
    tH = draw(st.floats(tL + 0.01, tL + 1.0))
    scale = draw(st.floats(1.0, 3.0))
    return ModelParams(alpha_H=aH, alpha_L=1.0 - aH, Y_H=YH, Y_L=YL, theta_H=tH, theta_L=tL,
                       psi=max(0.5 * (tH - YL), 0.05) * scale)
