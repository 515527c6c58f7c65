from __future__ import unicode_literals

import unittest

import pkg_resources

from uscqed.errors import RecipeNotFound
from uscqed.recipes import registry
from uscqed.recipes.registry import Recipe, Registry

try:
    from unittest import mock
except ImportError:
    import mock


class TestRegistry(unittest.TestCase):
    def test_registry_repr(self):
        str(registry)
        repr(registry)
        repr(registry.get("qrm-jcm-eigenvalues"))

    def test_names(self):
        self.assertIsInstance(registry.names, list)
        self.assertEqual(len(registry.names), len(set(registry.names)))

    def test_registry_entry_points(self):
        extensions = [
            pkg_resources.EntryPoint("extra1", "mod1"),
            pkg_resources.EntryPoint("extra2", "mod2"),
        ]
        iter_entry_points = mock.MagicMock(return_value=extensions)
        with mock.patch("pkg_resources.iter_entry_points", iter_entry_points):
            self.assertIn("extra1", registry.names)
            self.assertIn("extra2", registry.names)

    def test_unknown_recipe(self):
        with self.assertRaises(RecipeNotFound) as ctx:
            registry.get("unknown")
        self.assertEqual(str(ctx.exception), "no recipe named 'unknown'")

    def test_entry_point_load_error(self):
        entry_point = mock.MagicMock()
        entry_point.load.side_effect = ValueError("some error")
        iter_entry_points = mock.MagicMock(return_value=iter([entry_point]))

        with mock.patch("pkg_resources.iter_entry_points", iter_entry_points):
            with self.assertRaises(RecipeNotFound) as ctx:
                registry.get("test")
            self.assertEqual(
                "could not load recipe 'test'; some error", str(ctx.exception)
            )

    def test_entry_point_text(self):
        entry_point = mock.MagicMock()
        entry_point.load = mock.MagicMock(return_value="# extra\n[model]\n")
        iter_entry_points = mock.MagicMock(return_value=iter([entry_point]))

        with mock.patch("pkg_resources.iter_entry_points", iter_entry_points):
            recipe = registry.get("extra")
        self.assertEqual(recipe.description, "extra")
        self.assertEqual(recipe.load(), "# extra\n[model]\n")

    def test_entry_point_callable(self):
        entry_point = mock.MagicMock()
        entry_point.load = mock.MagicMock(return_value=lambda: "[model]\n")
        iter_entry_points = mock.MagicMock(return_value=iter([entry_point]))

        with mock.patch("pkg_resources.iter_entry_points", iter_entry_points):
            recipe = registry.get("extra")
        self.assertEqual(recipe.load(), "[model]\n")
        self.assertEqual(recipe.description, "")

    def test_install(self):
        """Test Registry.install accepts a recipe or a factory."""
        local = Registry()
        self.assertEqual(local.names, [])
        local.install(Recipe("foo", lambda: "# foo run\n"))

        @local.install
        def bar():
            return Recipe("bar", lambda: "")

        self.assertEqual(local.names, ["bar", "foo"])
        self.assertEqual(local.get_recipe("foo"), "# foo run\n")
        with self.assertRaises(RecipeNotFound):
            local.get("baz")

    def test_bundled_recipes_shadow_entry_points(self):
        entry_point = mock.MagicMock()
        iter_entry_points = mock.MagicMock(return_value=iter([entry_point]))
        with mock.patch("pkg_resources.iter_entry_points", iter_entry_points):
            recipe = registry.get("qrm-jcm-eigenvalues")
        entry_point.load.assert_not_called()
        self.assertTrue(recipe.description)
