"""bisetkit: exact double Burnside modules, biset functors and quasi-heredity checks"""

__version__ = "0.1.0"
