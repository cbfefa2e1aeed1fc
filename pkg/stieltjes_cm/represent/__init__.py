"""constructive side: bernstein-type builders, the `M`/`N` chains, asymptotic expansions and the `λ`-shift"""

from stieltjes_cm.represent.asymptotics import AsymptoticExpansion, asymptotic_expand
from stieltjes_cm.represent.bernstein import (
    BernsteinFunction,
    TailPowerDensity,
    build_bernstein_function,
    build_tail_function,
    levy_form,
    tail_measure,
)
from stieltjes_cm.represent.chains import (
    ChainSignReport,
    MChain,
    NChainReport,
    alternating_chain_sign_check,
    m_chain,
    n_chain,
)
from stieltjes_cm.represent.recursion import (
    InclusionReport,
    RhoRecursionReport,
    class_inclusion_check,
    lambda_shift_density,
    rho_recursion_check,
)

__all__ = [
    "AsymptoticExpansion",
    "BernsteinFunction",
    "ChainSignReport",
    "InclusionReport",
    "MChain",
    "NChainReport",
    "RhoRecursionReport",
    "TailPowerDensity",
    "alternating_chain_sign_check",
    "asymptotic_expand",
    "build_bernstein_function",
    "build_tail_function",
    "class_inclusion_check",
    "lambda_shift_density",
    "levy_form",
    "m_chain",
    "n_chain",
    "rho_recursion_check",
    "tail_measure",
]
