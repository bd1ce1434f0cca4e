"""Pure-numpy mirror-step kernels (fallback backend).

Each kernel applies one fused mirror update in place:

    w <- grad_inverse(grad(w) + s * g)

for the corresponding potential, where ``s`` already folds in the
learning rate and any constraint scaling. The compiled backend in
``_cykernels`` implements the same contract.
"""

import numpy as np


def l2_step(w, g, s):
    w += s * g


def qnorm_step(w, g, s, q):
    dual = np.sign(w) * np.abs(w) ** (q - 1.0)
    dual += s * g
    np.multiply(np.sign(dual), np.abs(dual) ** (1.0 / (q - 1.0)), out=w)


def entropy_step(w, g, s):
    """Multiplicative update; returns min(w) so callers can check positivity."""
    w *= np.exp(s * g)
    return float(w.min())
