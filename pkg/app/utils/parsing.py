"""Flag value parsing for list-valued CLI options"""
from typing import Callable, List, TypeVar

T = TypeVar("T")


def parse_list(raw: str, convert: Callable[[str], T]) -> List[T]:
    """
    Split a comma-separated flag value and convert each item.

    Examples:
        >>> parse_list("64,256,1024", int)
        [64, 256, 1024]
        >>> parse_list("1.05, 1.1", float)
        [1.05, 1.1]
    """
    items = [item.strip() for item in str(raw).split(",")]
    if not items or any(not item for item in items):
        raise ValueError(f"expected a comma-separated list, got {raw!r}")
    return [convert(item) for item in items]


def parse_int_list(raw: str) -> List[int]:
    return parse_list(raw, int)


def parse_float_list(raw: str) -> List[float]:
    return parse_list(raw, float)
