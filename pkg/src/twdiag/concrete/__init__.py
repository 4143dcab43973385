"""Computable coefficient categories."""

from .base import ColimitCert, ConcreteCategory, Diagram, LimitCert
from .chains import ChainCategory, ChainComplex, ChainMap
from .modules import Module, ModuleCategory, ModuleMap
from .msets import FiniteMonoid, FinPtdSet, MSet, MSetCategory, MSetMap, MonoidHom

__all__ = [
    "ColimitCert", "ConcreteCategory", "Diagram", "LimitCert",
    "ChainCategory", "ChainComplex", "ChainMap",
    "Module", "ModuleCategory", "ModuleMap",
    "FiniteMonoid", "FinPtdSet", "MSet", "MSetCategory", "MSetMap", "MonoidHom",
]
