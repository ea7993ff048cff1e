"""Builds the native extension; metadata lives in pyproject.toml."""

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "latticeweave._core",
    sources=[
        "bindings/core_module.cpp",
        "src/pauli.cpp",
        "src/lattice.cpp",
        "src/graph.cpp",
        "src/tableau.cpp",
        "src/statevector.cpp",
        "src/noise.cpp",
        "src/verification.cpp",
        "src/cli.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
    extra_compile_args=["-O3"],
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
