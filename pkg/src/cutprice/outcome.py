"""Plain records shared by the pricing modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .rational import Q, ZERO, as_q


@dataclass(frozen=True)
class Cut:
    """Valid inequality ``coeffs . x <= rhs`` over bids, priced as an item."""

    coeffs: Tuple["Q", ...]
    rhs: "Q"
    provenance: str = ""

    @classmethod
    def make(cls, coeffs, rhs, provenance=""):
        return cls(tuple(as_q(v) for v in coeffs), as_q(rhs), provenance)

    def lhs(self, x: Sequence) -> "Q":
        return sum((a * v for a, v in zip(self.coeffs, x) if a and v), ZERO)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.coeffs) and self.rhs.denominator == 1

    def support(self) -> List[int]:
        return [k for k, v in enumerate(self.coeffs) if v]


@dataclass(frozen=True)
class PriceVector:
    natural: Tuple["Q", ...]
    artificial: Tuple["Q", ...] = ()
    surplus: Tuple["Q", ...] = ()
    payments: Tuple["Q", ...] = ()

    @property
    def all_prices(self) -> Tuple["Q", ...]:
        return self.natural + self.artificial

    @property
    def revenue(self) -> "Q":
        return sum(self.payments, ZERO)


@dataclass
class EquilibriumReport:
    envy_free: bool = True
    envy_violations: List[int] = field(default_factory=list)
    market_cleared: bool = True
    unsold_priced: List[str] = field(default_factory=list)
    efficient: bool = True
    is_core: Optional[bool] = None
    blocking_coalition: Optional[Tuple[int, ...]] = None
    core_violation: "Q" = ZERO

    @property
    def is_we(self) -> bool:
        return self.envy_free and self.market_cleared and self.efficient


@dataclass
class PricingOutcome:
    rule: str
    allocation: Any
    payments: Tuple["Q", ...]
    prices: Optional[PriceVector] = None
    cuts: List[Cut] = field(default_factory=list)
    certificates: Dict[str, Optional[bool]] = field(default_factory=dict)
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def revenue(self) -> "Q":
        return sum(self.payments, ZERO)
