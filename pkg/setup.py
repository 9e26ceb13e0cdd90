from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [Extension("q2bkss.homology._elim", ["src/q2bkss/homology/_elim.pyx"])],
        language_level=3,
    )
)
