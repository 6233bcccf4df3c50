from setuptools import setup, find_packages

setup(
    name='bockstein_quad',
    version='0.1',
    description='Workbench for Bockstein closed quadratic maps over F_2, their quotient '\
        'algebras, cohomology and associated 2-groups.',
    packages=find_packages(),
    install_requires=[
        'numpy>=1.14.0',
        'pyyaml>=3.12',
        'scipy>=1.0.0',
    ],
    entry_points={
        'console_scripts': ['bq=bockstein_quad.cli:main'],
    },
)
