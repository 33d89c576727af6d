"""Mod-p cohomology of finite p-groups: products, Steenrod operations, Massey products
and the productivity criteria for cohomology classes."""

__version__ = "0.1.0"
