#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

from setuptools import setup, find_packages

setup(name='degseq',
      version='0.1.0',
      license='GPL',
      author='Sofia Ares Oliveira',
      description='Existence of maximum likelihood estimates for degree sequence network models',
      install_requires=[
            'numpy',
            'scipy',
            'tqdm',
            'sacred',
            'pandas',
            'click',
            'networkx'
      ],
      extras_require={
            'doc': [
                  'sphinx',
                  'sphinx-autodoc-typehints',
                  'sphinx-rtd-theme',
                  'sphinxcontrib-bibtex',
                  'sphinxcontrib-websupport'
            ],
            'test': [
                  'pytest',
                  'hypothesis'
            ],
      },
      entry_points={
            'console_scripts': ['degseq=degseq.cli:main'],
      },
      packages=find_packages(where='.', exclude=['tests']),
      python_requires='>=3.9',
      zip_safe=False)
