"""Function algebra family factory and exports."""

from .base import BasisTerms, FunctionFamily
from .classical import ClassicalFamily
from .three_point import ThreePointFamily
from .torus import TorusFamily, basis_product_cached

# Family registry
FAMILIES = {
    "classical": ClassicalFamily,
    "threepoint": ThreePointFamily,
    "torus": TorusFamily,
}


def create_family(name: str, **kwargs) -> FunctionFamily:
    """
    Create a function algebra family.

    Args:
        name: Family name ('classical', 'threepoint' or 'torus')
        **kwargs: Additional arguments to pass to the family constructor

    Returns:
        Family instance

    Raises:
        ValueError: If the family name is not supported
    """
    if name not in FAMILIES:
        available = ", ".join(FAMILIES.keys())
        raise ValueError(f"Unknown family '{name}'. Available: {available}")

    family_class = FAMILIES[name]
    return family_class(**kwargs)


def list_families() -> list:
    """Get list of available family names."""
    return list(FAMILIES.keys())


__all__ = [
    "BasisTerms",
    "FunctionFamily",
    "ClassicalFamily",
    "ThreePointFamily",
    "TorusFamily",
    "basis_product_cached",
    "create_family",
    "list_families",
]
