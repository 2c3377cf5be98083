""" Quantum cost of multi-controlled Toffoli gates and circuits.

The elementary model counts the elementary quantum gates needed per C^mNOT on
n lines:

    m = 0, 1           1
    m = 2              5
    m = n-1            2^n - 3          (no free line)
    3 <= m <= ceil(n/2)   12m - 22      (enough free lines to borrow)
    ceil(n/2) < m <= n-2  24m - 40      (24n - 88 applied to the gate's m+2 lines)

For n < 7 the last regime is capped by 2^n - 3. The unit model counts gates.
"""

from math import ceil
from dataclasses import dataclass

from source.misc.errors import DomainError
from source.model.circuit import Circuit, Gate


COST_VARIANTS = ('elementary', 'unit')


@dataclass(frozen=True)
class CostModel:
    variant: str = 'elementary'

    def __post_init__(self):
        if self.variant not in COST_VARIANTS:
            raise DomainError(f'Unknown cost model "{self.variant}", choose from {list(COST_VARIANTS)}')

    def gate_cost(self, g: Gate, n: int) -> int:
        return mct_cost(g.num_controls, n, self)


DEFAULT_COST_MODEL = CostModel()


def mct_cost(m: int, n: int, model: CostModel = DEFAULT_COST_MODEL) -> int:
    """ Cost of one gate with m controls in an n-line circuit.

    Args:
        m (int): Number of controls.
        n (int): Number of circuit lines.
        model (CostModel, optional): Cost variant. Defaults to the elementary model.

    Raises:
        DomainError: Unless 0 <= m <= n-1 and n >= 1.

    Returns:
        int: Cost, at least 1.
    """
    if n < 1 or m < 0 or m > n - 1:
        raise DomainError(f'A gate with {m} controls does not fit on {n} lines')

    if model.variant == 'unit':
        return 1

    if m <= 1:
        return 1
    if m == 2:
        return 5
    if m == n - 1:
        return (1 << n) - 3
    if m <= ceil(n / 2):
        return 12 * m - 22

    # at least one free line: the no-ancilla rule on the gate's own m+2 lines
    cost = 24 * m - 40
    if n < 7:
        cost = min(cost, (1 << n) - 3)
    return cost


def circuit_cost(c: Circuit, model: CostModel = DEFAULT_COST_MODEL) -> int:
    return sum(model.gate_cost(g, c.n) for g in c.gates)
