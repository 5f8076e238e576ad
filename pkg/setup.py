from setuptools import setup, find_packages

setup(
    name="ellk3-stab",
    version="1.0.0",
    description="Exact Bridgeland stability computations for line bundles on Weierstrass elliptic and K3 surfaces",
    author="ellk3-stab Team",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "python-dotenv>=1.0.0",
        "numpy>=1.24.0",
        "sympy>=1.12",
        "mpmath>=1.3.0",
        "Pillow>=10.0.0",
        "tqdm>=4.66.0",
    ],
    python_requires=">=3.8",
    entry_points={
        "console_scripts": [
            "ellk3-stab=ellk3_stab.cli:main",
        ],
    },
)
