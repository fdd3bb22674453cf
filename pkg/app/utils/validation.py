from fractions import Fraction
from typing import Any, Optional, Tuple

from app.models import Graph, GraphError, Params, ParamsError
from app.utils import parse_rational

# Validation constants
MAX_NODES = 64
MAX_SEED = (1 << 64) - 1
MAX_REPETITIONS = 100000
MAX_ITERATIONS = 1000000


def validate_node_count(value: Any, minimum: int = 1, maximum: int = MAX_NODES) -> Tuple[bool, str, Optional[int]]:
    """Validate a node count.

    Args:
        value: Raw value (int or numeric string)
        minimum: Smallest accepted count
        maximum: Largest accepted count

    Returns:
        Tuple[bool, str, Optional[int]]: (is_valid, error_message, cleaned_value)
    """
    if isinstance(value, bool):
        return False, "Node count must be an integer", None
    try:
        n = int(str(value).strip())
    except (ValueError, TypeError):
        return False, "Node count must be an integer", None
    if n < minimum or n > maximum:
        return False, f"Node count must be between {minimum} and {maximum}", None
    return True, "", n


def validate_rational(value: Any, name: str) -> Tuple[bool, str, Optional[Fraction]]:
    if value is None or isinstance(value, bool):
        return False, f"{name} is required", None
    try:
        return True, "", parse_rational(value)
    except ParamsError as e:
        return False, f"{name}: {e}", None


def validate_params(delta: Any, cost: Any, relaxed: bool = False) -> Tuple[bool, str, Optional[Params]]:
    """Validate link benefit and cost.

    Returns:
        Tuple[bool, str, Optional[Params]]: (is_valid, error_message, params)
    """
    for name, raw in (("delta", delta), ("cost", cost)):
        is_valid, error, _ = validate_rational(raw, name)
        if not is_valid:
            return False, error, None
    try:
        return True, "", Params(parse_rational(delta), parse_rational(cost), relaxed=relaxed)
    except ParamsError as e:
        return False, str(e), None


def validate_density(value: Any) -> Tuple[bool, str, Optional[Fraction]]:
    is_valid, error, density = validate_rational(value, "density")
    if not is_valid:
        return False, error, None
    if not 0 <= density <= 1:
        return False, "density must lie in [0, 1]", None
    return True, "", density


def validate_step(value: Any) -> Tuple[bool, str, Optional[Fraction]]:
    """Validate a grid step: positive and dividing 1 evenly (1/step is an integer)."""
    is_valid, error, step = validate_rational(value, "step")
    if not is_valid:
        return False, error, None
    if step <= 0 or step > 1:
        return False, "step must lie in (0, 1]", None
    if (1 / step).denominator != 1:
        return False, f"step {step} does not divide 1 evenly", None
    return True, "", step


def validate_positive_int(value: Any, name: str, maximum: int) -> Tuple[bool, str, Optional[int]]:
    if isinstance(value, bool):
        return False, f"{name} must be an integer", None
    try:
        number = int(str(value).strip())
    except (ValueError, TypeError):
        return False, f"{name} must be an integer", None
    if number < 1 or number > maximum:
        return False, f"{name} must be between 1 and {maximum}", None
    return True, "", number


def validate_seed(value: Any) -> Tuple[bool, str, Optional[int]]:
    try:
        seed = int(str(value).strip(), 0)
    except (ValueError, TypeError):
        return False, "seed must be an integer", None
    if not 0 <= seed <= MAX_SEED:
        return False, "seed must be a non-negative 64-bit integer", None
    return True, "", seed


def validate_edges(n: Any, edges: Any) -> Tuple[bool, str, Optional[Graph]]:
    """Validate a node count plus a JSON-style list of [i, j] pairs and build the graph.

    Returns:
        Tuple[bool, str, Optional[Graph]]: (is_valid, error_message, graph)
    """
    is_valid, error, count = validate_node_count(n)
    if not is_valid:
        return False, error, None
    if not isinstance(edges, (list, tuple)):
        return False, "edges must be a list of [i, j] pairs", None
    pairs = []
    for edge in edges:
        if not isinstance(edge, (list, tuple)) or len(edge) != 2:
            return False, f"Invalid edge {edge!r}: expected [i, j]", None
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in edge):
            return False, f"Invalid edge {edge!r}: node ids must be integers", None
        pairs.append((edge[0], edge[1]))
    try:
        return True, "", Graph(count, pairs)
    except GraphError as e:
        return False, str(e), None
