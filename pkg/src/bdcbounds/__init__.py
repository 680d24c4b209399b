"""Capacity bounds for the binary deletion channel.

Submodules: ``bitseq`` (bit-string primitives), ``fibdc`` (finite-block transition
matrices), ``baa`` (Blahut-Arimoto capacities), ``bounds`` (closed-form and
numerically maximized bounds), ``markov`` (Markov inputs and their outputs),
``curves`` (grid evaluation and CSV export), ``verify`` and ``cli``.
"""

from bdcbounds._kernels import BACKEND
from bdcbounds.exceptions import DomainError, EstimationError

__version__ = "0.1.0"

__all__ = ["BACKEND", "DomainError", "EstimationError", "__version__"]
