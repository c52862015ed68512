"""Central finite-difference verification of analytic gradients."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .params import Param


@dataclass
class GradCheckReport:
    max_rel_error: float
    passed: bool
    per_param: dict[str, float] = field(default_factory=dict)


def grad_check(loss_fn, params: list[Param], eps=1e-5, tol=1e-4) -> GradCheckReport:
    """Compare analytic gradients against central differences, coordinate-wise.

    ``loss_fn()`` must run forward and backward deterministically (fix any
    dropout masks) and return the scalar loss; gradients land in the params.
    Relative error per coordinate is |a - n| / max(1e-8, |a| + |n|).
    """
    for p in params:
        p.zero_grad()
    loss_fn()
    analytic = [p.grad.copy() for p in params]

    worst = 0.0
    per_param: dict[str, float] = {}
    for p, grad in zip(params, analytic):
        flat = p.value.reshape(-1)
        worst_here = 0.0
        for idx in range(flat.size):
            orig = flat[idx]
            flat[idx] = orig + eps
            f_plus = loss_fn()
            flat[idx] = orig - eps
            f_minus = loss_fn()
            flat[idx] = orig
            numeric = (f_plus - f_minus) / (2 * eps)
            a = grad.reshape(-1)[idx]
            rel = abs(a - numeric) / max(1e-8, abs(a) + abs(numeric))
            worst_here = max(worst_here, rel)
        per_param[p.name or f"param{id(p)}"] = worst_here
        worst = max(worst, worst_here)

    return GradCheckReport(max_rel_error=worst, passed=worst < tol, per_param=per_param)
