"""
Basic structure tests for ellk3-stab
Tests that don't require external dependencies
"""

import json
import os
import sys
import unittest

# Add parent directory to path
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)

MODULES = [
    'ellk3_stab/__init__.py',
    'ellk3_stab/errors.py',
    'ellk3_stab/lattice.py',
    'ellk3_stab/charges.py',
    'ellk3_stab/fmt.py',
    'ellk3_stab/cce.py',
    'ellk3_stab/regions.py',
    'ellk3_stab/walls.py',
    'ellk3_stab/render.py',
    'ellk3_stab/profiles.py',
    'ellk3_stab/verify.py',
    'ellk3_stab/cli.py',
]


def _path(relative):
    return os.path.join(ROOT, relative)


class TestStructure(unittest.TestCase):
    """Test basic module structure"""

    def test_package_exists(self):
        """Test that the ellk3_stab package exists"""
        self.assertTrue(os.path.isdir(_path('ellk3_stab')))

    def test_required_files_exist(self):
        """Test that required files are present"""
        required_files = MODULES + [
            'requirements.txt',
            'setup.py',
            'config.json',
            'README.md',
            'QUICKSTART.md',
            'DESIGN.md',
            'example_usage.py',
            'example_with_callback.py',
            '.gitignore',
            '.env.example',
        ]
        for file_path in required_files:
            self.assertTrue(os.path.exists(_path(file_path)), f"Required file missing: {file_path}")

    def test_python_files_compile(self):
        """Test that all Python files compile without syntax errors"""
        import py_compile

        for file_path in MODULES + ['setup.py', 'example_usage.py', 'example_with_callback.py']:
            try:
                py_compile.compile(_path(file_path), doraise=True)
            except py_compile.PyCompileError as e:
                self.fail(f"Syntax error in {file_path}: {e}")

    def test_requirements_file_format(self):
        """Test that requirements.txt lists the numeric stack"""
        with open(_path('requirements.txt'), 'r') as f:
            content = f.read()
        for dep in ['python-dotenv', 'sympy', 'mpmath', 'numpy', 'Pillow', 'tqdm']:
            self.assertIn(dep, content, f"Expected dependency '{dep}' not found")

    def test_setup_file_structure(self):
        """Test that setup.py declares the console script"""
        with open(_path('setup.py'), 'r') as f:
            content = f.read()
        self.assertIn('setup(', content)
        self.assertIn('name="ellk3-stab"', content)
        self.assertIn('ellk3-stab=ellk3_stab.cli:main', content)

    def test_gitignore_has_essentials(self):
        """Test that .gitignore includes essential patterns"""
        with open(_path('.gitignore'), 'r') as f:
            content = f.read()
        for pattern in ['__pycache__', '.env', '*.py', 'venv']:
            self.assertIn(pattern, content, f"Missing .gitignore pattern: {pattern}")

    def test_readme_has_content(self):
        """Test that README has substantial content"""
        with open(_path('README.md'), 'r', encoding='utf-8') as f:
            content = f.read()
        self.assertGreater(len(content), 1000, "README seems too short")
        self.assertIn('Installation', content)
        self.assertIn('Usage', content)

    def test_config_json_valid(self):
        """Test that config.json is valid JSON"""
        with open(_path('config.json'), 'r') as f:
            config = json.load(f)
        self.assertIn('ellk3_stab', config)
        self.assertIn('default_settings', config)


class TestModuleStructure(unittest.TestCase):
    """Test module structure without importing dependencies"""

    def test_module_docstrings(self):
        """Test that modules have docstrings"""
        for module_path in MODULES:
            with open(_path(module_path), 'r', encoding='utf-8') as f:
                content = f.read()
            self.assertTrue(content.strip().startswith('"""'), f"Module {module_path} missing docstring")

    def test_class_definitions(self):
        """Test that expected classes are defined"""
        expected_classes = {
            'ellk3_stab/lattice.py': 'ChernVector',
            'ellk3_stab/charges.py': 'ChargeSpec',
            'ellk3_stab/fmt.py': 'LatticeMap',
            'ellk3_stab/cce.py': 'TransitionData',
            'ellk3_stab/regions.py': 'RegionLabel',
            'ellk3_stab/walls.py': 'WallRecord',
            'ellk3_stab/verify.py': 'VerificationRunner',
        }
        for file_path, class_name in expected_classes.items():
            with open(_path(file_path), 'r', encoding='utf-8') as f:
                content = f.read()
            self.assertIn(f'class {class_name}', content, f"Class {class_name} not found in {file_path}")


if __name__ == '__main__':
    unittest.main(verbosity=2)
