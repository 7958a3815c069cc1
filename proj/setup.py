from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "cvatm._core",
    sources=[
        "python/bindings.cpp",
        "src/specfun.cpp",
        "src/channel.cpp",
        "src/fading.cpp",
        "src/impairments.cpp",
        "src/keyrate.cpp",
        "src/engine.cpp",
        "src/config.cpp",
        "src/output.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
    extra_compile_args=["-pthread"],
    extra_link_args=["-pthread"],
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
