from hypothesis import strategies as st

from app.services.partition_svc import canonicalize


def partitions(max_part: int = 12, max_len: int = 10):
    """Particiones arbitrarias de peso pequeño."""
    return st.lists(st.integers(min_value=1, max_value=max_part), max_size=max_len).map(canonicalize)


def distinct_partitions(max_part: int = 20, max_len: int = 6):
    return st.sets(st.integers(min_value=1, max_value=max_part), max_size=max_len).map(canonicalize)
