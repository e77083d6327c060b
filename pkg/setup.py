"""Builds the optional compiled chart kernel; the package works without it."""

from setuptools import setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("rlfg._chart", ["src/rlfg/_chart.pyx"], language="c++",
                   extra_compile_args=["-O2", "-std=c++11"])],
        compiler_directives={"language_level": 3},
    )
except Exception as exc:  # Cython missing or the .pyx failed to translate
    print(f"warning: compiled kernel disabled ({exc})")
    ext_modules = []


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # no compiler: fall back to pure Python
            print(f"warning: compiled kernel not built ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: compiled kernel not built ({exc})")


setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
