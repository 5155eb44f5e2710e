import hashlib
import json
from fractions import Fraction
from typing import Any, Dict, Union

Rational = Union[int, Fraction]

SCHEMA_VERSION = 1


def frac_to_json(x: Rational) -> Dict[str, int]:
    """有理数序列化为 {num, den}（最简分数）"""
    f = Fraction(x)
    return {"num": f.numerator, "den": f.denominator}


def canonical_json(obj: Any) -> str:
    """稳定的 JSON 文本（用于摘要与字节级一致输出）"""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def stable_digest(obj: Any, length: int = 64) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()[:length]
