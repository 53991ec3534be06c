from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "equibox._gf2core",
                ["src/equibox/_gf2core.pyx"],
                language="c++",
                extra_compile_args=["-O2", "-std=c++11"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython: install runs on the pure-Python kernel only.
    ext_modules = []

setup(ext_modules=ext_modules)
