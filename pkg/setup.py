from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [Extension("dimscale._ckernels", ["src/dimscale/_ckernels.pyx"])]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
