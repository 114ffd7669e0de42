import setuptools

with open("README.md", "r", encoding="utf-8") as f:
    long_description = f.read()

__version__ = "0.1.0"

REPO_NAME = "radopr"
SRC_REPO = "radopr"

setuptools.setup(
    name=SRC_REPO,
    version=__version__,
    description="Decide, certify and brute-force check partition regularity of Diophantine equations",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_namespace_packages(include=["src.radopr*"]),
    python_requires=">=3.9",
    install_requires=[
        "pandas",
        "mlflow",
        "numpy",
        "sympy",
        "python-box",
        "pyYAML",
        "tqdm",
        "ensure",
        "joblib",
    ],
    entry_points={"console_scripts": ["radopr=src.radopr.cli:main"]},
)
