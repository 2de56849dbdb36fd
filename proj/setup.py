"""CMake-driven build of the pybind11 extension.

The extension is compiled by the project's CMake tree (library targets
off, bindings on) and the resulting module is copied to wherever
setuptools expects it. Requires cmake on PATH; install with
``pip install --no-build-isolation -e .`` so the interpreter's pybind11
is visible to CMake.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DSPARSENE_BUILD_CLI=OFF",
                "-DSPARSENE_BUILD_TESTS=OFF",
                "-DSPARSENE_BUILD_PYTHON=ON",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_core"],
            check=True,
        )

        built = sorted((build_dir / "python" / "sparsene").glob("_core*.so"))
        if not built:
            raise RuntimeError("CMake did not produce the _core module")
        target = Path(self.get_ext_fullpath(ext.name)).resolve()
        target.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[-1], target)


setup(
    ext_modules=[CMakeExtension("sparsene._core")],
    cmdclass={"build_ext": CMakeBuild},
)
