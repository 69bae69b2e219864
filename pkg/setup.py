from setuptools import setup

with open("README.md", encoding="utf-8") as f:
    long_description = f.read()


setup(
    name="theta-lab",
    version="0.1.0",
    author="theta-lab developers",
    description="Theta and Maass-Shimura operators on q-expansions of Hermitian modular forms (theta-lab)",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="Apache-2.0",
    package_dir={"": "src"},
    packages=["interfaces"],
    py_modules=[
        "check_handler",
        "cli",
        "cmfield",
        "config",
        "errors",
        "gmks",
        "handler_helpers",
        "hermidx",
        "invariant_suites",
        "kmatrix",
        "ks_handler",
        "maass",
        "maass_handler",
        "models",
        "qexp",
        "runtime_provider",
        "theta",
        "theta_handler",
        "unitary",
        "weights",
    ],
    data_files=[("share/theta-lab/fixtures", ["src/fixtures/" + name for name in [
        "delta.json", "e4.json", "e6.json", "gamma_n2.json", "n2_diag12.json", "n2_mixed.json",
        "one_plus_q.json", "point_n1.json", "point_n2.json",
    ]])],
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.10",
    install_requires=[
        "loguru>=0.7.0",
        "pydantic>=2.0.0",
        "pydantic-settings>=2.0.0",
        "python-dotenv>=1.0.0",
        "cachetools>=5.5.0",
        "sympy>=1.12",
    ],
    entry_points={
        "console_scripts": [
            "theta-lab = cli:main",
        ],
    },
    keywords=["modular-forms", "hermitian", "p-adic", "theta-operator", "number-theory"],
)
