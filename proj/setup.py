"""Thin shim: the extension is built by the repository's CMake project.

`pip install --no-build-isolation -e .` configures a CMake tree under the
setuptools temp dir, builds only the `_core` target, and copies the module
next to the package sources. All metadata lives in pyproject.toml.
"""

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
        source = Path(__file__).resolve().parent
        build = Path(self.build_temp).resolve() / "cmake"
        build.mkdir(parents=True, exist_ok=True)
        subprocess.run(
            [
                "cmake",
                "-S",
                str(source),
                "-B",
                str(build),
                "-DCMAKE_BUILD_TYPE=Release",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build), "--target", "_core"], check=True
        )
        built = sorted((build / "python" / "hdsgd").glob("_core.*"))
        if not built:
            raise RuntimeError("cmake build did not produce the _core module")
        dest = Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        self.copy_file(str(built[-1]), str(dest))


setup(
    ext_modules=[CMakeExtension("hdsgd._core")],
    cmdclass={"build_ext": CMakeBuild},
)
