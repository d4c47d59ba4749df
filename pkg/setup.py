#!/usr/bin/env python
from setuptools import setup

with open('README.md', 'r') as fh:
    long_desc = fh.read()

setup(name='barrier-urns',
      version='1.0.0',
      description='Simulation and statistical verification of randomly reinforced urns with random barriers',
      long_description=long_desc,
      long_description_content_type='text/markdown',
      classifiers=[
          'Programming Language :: Python :: 3 :: Only',
          'Programming Language :: Python :: 3.8',
          'Programming Language :: Python :: 3.9',
          'Programming Language :: Python :: 3.10',
      ],
      install_requires=[
          'pipelinewise-singer-python==1.*',
          'terminaltables==3.1.*',
          'jsonschema==3.2.*',
          'numpy==1.*',
          'scipy==1.*',
          'numba>=0.56',
      ],
      extras_require={
          'dev': [
              'pylint==2.12',
              'ipdb==0.13.*'
          ],
          'test': [
              'pytest==6.2.5',
              'pytest-cov==3.0.0',
              'hypothesis==6.*'
          ]
      },
      entry_points='''
          [console_scripts]
          barrier-urns=barrier_urns:main
      ''',
      packages=['barrier_urns', 'barrier_urns.experiments'],
)
