from fractions import Fraction
from itertools import combinations
from logging import getLogger, Formatter, StreamHandler

from app.orbifold_ht.constants import LOG_LEVEL


_defaults = {"log_level": LOG_LEVEL}


def set_log_level(log_level):
    """Default level for loggers created from now on."""
    _defaults["log_level"] = log_level


def get_logger(name, log_level=None):
    log_level = log_level or _defaults["log_level"]
    logger = getLogger(name)
    logger.setLevel(log_level)

    if not logger.handlers:
        handler = StreamHandler()
        handler.setFormatter(Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
        logger.addHandler(handler)
    for handler in logger.handlers:
        handler.setLevel(log_level)

    return logger


def format_rational(value):
    """Exact "a/b" rendering; integers stay bare."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return "{}/{}".format(value.numerator, value.denominator)


def parse_rational(text):
    text = str(text).strip()
    if not text:
        raise ValueError("empty rational")
    return Fraction(text)


def permutation_sign(sequence):
    """Sign of the permutation sorting ``sequence`` (distinct, comparable items)."""
    inversions = 0
    items = list(sequence)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def subsets(indices):
    """All subsets of ``indices`` as sorted tuples, by size then lexicographically."""
    indices = tuple(sorted(indices))
    for size in range(len(indices) + 1):
        for subset in combinations(indices, size):
            yield subset


def format_index_set(indices):
    """1-based comma list used by the class-expression syntax."""
    return ",".join(str(i + 1) for i in indices)
