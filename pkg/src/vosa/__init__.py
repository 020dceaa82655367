"""Exact-arithmetic engine for free-fermion vertex operator superalgebras,
their twisted modules and twisted Zhu algebras."""

__version__ = "0.1.0"
