"""Global size caps.

Defaults can be overridden through the ``COCHAIN_BUDGET`` environment
variable, a comma separated list of ``key=value`` pairs, e.g.
``COCHAIN_BUDGET="columns=500000,n_max=7"``.
"""

import os
from dataclasses import dataclass, fields, replace

from .errors import BudgetExceeded, ParseError


@dataclass(frozen=True)
class Budget:
    n_max: int = 6
    columns: int = 200_000
    bicomplex_cells: int = 2**16
    bicomplex_n_max: int = 5
    sigma_order: int = 9
    q_order: int = 16


def parse_budget(text: str) -> Budget:
    b = Budget()
    names = {f.name for f in fields(Budget)}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise ParseError(f"bad budget entry {item!r}")
        try:
            b = replace(b, **{key: int(value)})
        except ValueError:
            raise ParseError(f"budget value for {key} is not an integer") from None
    return b


def current_budget() -> Budget:
    return parse_budget(os.environ.get("COCHAIN_BUDGET", ""))


def check(what: str, size: int, cap: int):
    if size > cap:
        raise BudgetExceeded(f"{what}: size {size} exceeds cap {cap}", witness=(size, cap))
