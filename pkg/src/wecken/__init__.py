"""Nielsen numbers and Wecken-sufficient classes for free-group endomorphisms."""

from .freegroup import Word, count_words, enumerate_words, format_word, parse_word
from .wagner import (
    Endomorphism,
    NoRemnantError,
    class_partition,
    has_remnant,
    nielsen_number,
    tail_table,
)
from .classes import class_flags, classify_t, is_kn, is_ln, is_vn

__version__ = "0.1.0"
