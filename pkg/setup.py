import re

from setuptools import setup

# Read the version without importing the package, which needs numpy.
with open('featsel/__init__.py', 'rt', encoding='utf-8') as fp:
    __version__ = re.search(r"^__version__ = '([^']+)'", fp.read(), re.M).group(1)

CLASSIFIERS = [
    'Development Status :: 3 - Alpha',
    'Intended Audience :: Science/Research',
    'Environment :: Console',
    'License :: OSI Approved :: BSD License',
    'Operating System :: OS Independent',
    'Programming Language :: Python :: 3',
    'Topic :: Scientific/Engineering :: Mathematics',
]

LONG_DESC = open('README.rst', 'rt').read() + '\n\n' + open('CHANGES.rst', 'rt').read()

setup(
    name='featsel',
    version=__version__,
    packages=['featsel'],
    license='BSD',
    description="Filter and wrapper feature selection for high-dimensional two-class data",
    long_description=LONG_DESC,
    classifiers=CLASSIFIERS,
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.4',
        'matplotlib>=3.3',
    ],
    extras_require={
        'test': ['pytest'],
    },
    entry_points = {
        'console_scripts': [
            'featsel = featsel:main',
        ],
    },
    command_options={
       'build_sphinx': {
           'version': ('setup.py', __version__),
           'release': ('setup.py', __version__)}
    },
)
