# coding: utf-8
"""Bundled run files reproducing every class of sweep.

Recipes are TOML run files shipped as package data, plus any text
published by other distributions in the ``uscqed.recipes`` entry-point
group. Pass ``recipe://<name>`` wherever a run-file path is accepted.
"""

from .registry import Recipe, Registry, registry

get_recipe = registry.get_recipe

__all__ = ["Recipe", "Registry", "registry", "get_recipe"]
