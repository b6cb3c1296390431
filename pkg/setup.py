#!/usr/bin/env python

try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup


version = open('ManifoldLab/VERSION', 'r').read().strip()


requires = ['numpy >=1.17', 'scipy >=1.4', 'simplejson']


setup(name='ManifoldLab',
      version=version,
      description='A numerical lab for learning functions on low-dimensional manifolds.',
      install_requires=requires,
      tests_require=['pytest'],
      packages=['ManifoldLab'],
      scripts=['scripts/manifoldlab.py'],
      package_data={'ManifoldLab': ['VERSION']},
      license='BSD')
