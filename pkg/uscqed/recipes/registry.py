# coding: utf-8
"""`Registry` class mapping recipe names to run-file text.
"""

from __future__ import absolute_import, print_function, unicode_literals

import typing

import collections
import pkg_resources

from ..errors import RecipeNotFound

if typing.TYPE_CHECKING:
    from typing import Callable, Dict, List, Text, Union


class Recipe(object):
    """A named run file.

    Arguments:
        name (str): the recipe name.
        loader (callable): returns the TOML text of the run file.

    """

    def __init__(self, name, loader):
        # type: (Text, Callable[[], Text]) -> None
        self.name = name
        self.loader = loader

    def __repr__(self):
        # type: () -> Text
        return "<recipe {!r}>".format(self.name)

    def load(self):
        # type: () -> Text
        """Get the run-file text."""
        return self.loader()

    @property
    def description(self):
        # type: () -> Text
        """`str`: the first comment line of the run file."""
        for line in self.load().splitlines():
            line = line.strip()
            if line.startswith("#"):
                return line.lstrip("#").strip()
            if line:
                break
        return ""


class Registry(object):
    """A registry of `Recipe` instances."""

    #: URL prefix naming a recipe in place of a file path.
    protocol = "recipe://"

    def __init__(self, package=None, load_extern=False):
        # type: (Text, bool) -> None
        """Create a registry object.

        Arguments:
            package (str, optional): a package whose ``*.toml`` resources
                are installed as recipes named by their file stem.
            load_extern (bool, optional): Set to `True` to load recipes
                from the ``uscqed.recipes`` entry-point group.

        """
        self.load_extern = load_extern
        self._recipes = {}  # type: Dict[Text, Recipe]
        if package is not None:
            for resource in sorted(pkg_resources.resource_listdir(package, "")):
                if resource.endswith(".toml"):
                    self.install(_bundled(package, resource))

    def __repr__(self):
        # type: () -> Text
        return "<uscqed-registry {!r}>".format(self.names)

    def install(self, recipe):
        # type: (Union[Recipe, Callable[[], Recipe]]) -> Recipe
        """Install a recipe, or a callable returning one."""
        _recipe = recipe if isinstance(recipe, Recipe) else recipe()
        assert isinstance(_recipe, Recipe), "Recipe instance required"
        self._recipes[_recipe.name] = _recipe
        return _recipe

    @property
    def names(self):
        # type: () -> List[Text]
        """`list`: the names of the available recipes."""
        _names = sorted(self._recipes)
        if self.load_extern:
            _names.extend(
                sorted(
                    entry_point.name
                    for entry_point in pkg_resources.iter_entry_points("uscqed.recipes")
                )
            )
            _names = list(collections.OrderedDict.fromkeys(_names))
        return _names

    def get(self, name):
        # type: (Text) -> Recipe
        """Get a recipe by name.

        Installed recipes take precedence over entry points, which
        resolve to either the run-file text or a callable returning it.

        Raises:
            ~uscqed.errors.RecipeNotFound: if no recipe has that name or
                its entry point cannot be loaded.

        """
        if name in self._recipes:
            return self._recipes[name]
        entry_point = None
        if self.load_extern:
            entry_point = next(
                pkg_resources.iter_entry_points("uscqed.recipes", name), None
            )
        if entry_point is None:
            raise RecipeNotFound(name)
        try:
            loaded = entry_point.load()
        except Exception as exception:
            reason = str(exception).replace("{", "{{").replace("}", "}}")
            raise RecipeNotFound(name, msg="could not load recipe '{name}'; " + reason)
        if callable(loaded):
            return Recipe(name, loaded)
        return Recipe(name, lambda: loaded)

    def get_recipe(self, name):
        # type: (Text) -> Text
        """Get the run-file text of a recipe."""
        return self.get(name).load()


def _bundled(package, resource):
    # type: (Text, Text) -> Recipe
    def load():
        # type: () -> Text
        return pkg_resources.resource_string(package, resource).decode("utf-8")

    return Recipe(resource[: -len(".toml")], load)


registry = Registry(package=__name__.rpartition(".")[0], load_extern=True)
