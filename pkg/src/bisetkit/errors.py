"""bisetkit 异常层级"""

from typing import Optional


class BisetkitError(Exception):
    """所有 bisetkit 错误的基类"""


class BoundExceeded(BisetkitError):
    """群枚举超过上限"""

    def __init__(self, bound: int, what: str = "group"):
        self.bound = bound
        self.what = what
        super().__init__(f"{what} exceeds the enumeration bound {bound}")


class GrammarError(BisetkitError):
    """群描述语法错误"""


class NotASubgroup(BisetkitError):
    """给定元素集不是子群"""


class SourceTargetMismatch(BisetkitError):
    """复合时中间群不一致"""


class InvalidData(BisetkitError):
    """初等 biset 的数据不合法"""


class DimensionMismatch(BisetkitError):
    """矩阵维数不匹配"""


class SplitFailure(BisetkitError):
    """有理表示分裂失败"""


class InconsistentSystem(BisetkitError):
    """线性方程组无解（通常意味着单模目录不完整）"""


class CatalogIncomplete(BisetkitError):
    """单模目录与半单商的维数不符"""


class ReportMismatch(BisetkitError):
    """报告中的断言失败，指出第一个不符的事实"""

    def __init__(self, fact: str, expected: object, actual: object):
        self.fact = fact
        self.expected = expected
        self.actual = actual
        super().__init__(f"{fact}: expected {expected!r}, got {actual!r}")


class CacheError(BisetkitError):
    """缓存读写错误"""

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        super().__init__(f"{message} ({path})" if path else message)
