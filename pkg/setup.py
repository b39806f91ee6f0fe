from setuptools import Extension, setup

# The compiled kernels are a speedup, not a requirement: if Cython (or a C
# compiler) is unavailable the package installs pure and qdisk._kernels falls
# back to the numpy implementation at import time.
try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "qdisk._kernels._native",
                ["src/qdisk/_kernels/_native.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(
    # metadata lives in pyproject.toml; repeated here so builds with a
    # pre-PEP-621 setuptools still produce a usable wheel
    name="qdisk",
    version="0.1.0",
    package_dir={"": "src"},
    packages=["qdisk", "qdisk._kernels"],
    install_requires=["numpy>=1.24"],
    entry_points={"console_scripts": ["qdisk=qdisk.cli:main"]},
    ext_modules=ext_modules,
)
