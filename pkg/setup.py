import sys, io

try:
  from setuptools import setup
except ImportError:
  sys.exit('ERROR: setuptools is required.\nTry using "pip install setuptools".')


# use README.rst for the long description
with io.open('README.rst', encoding='utf-8') as fh:
  long_description = fh.read()

# Scan the main package for the version string
version_file = 'vsahand/sim.py'
version = None
with io.open(version_file, encoding='utf-8') as fh:
  try:
    version = [line.split('=')[1].strip().strip("'") for line in fh if \
      line.startswith('__version__')][0]
  except IndexError:
    pass

if version is None:
  raise RuntimeError('Unable to find version string in file: {0}'.format(version_file))


setup(name='vsahand',
  version=version,
  author='The vsahand developers',
  description='Variable stiffness prosthetic hand design and simulation toolkit',
  long_description=long_description,
  platforms = ['Any'],
  install_requires = ['numpy', 'scipy'],
  extras_require = {
    'color': ['colorama'],
    'plot': ['matplotlib']
  },
  packages = ['vsahand', 'test'],
  package_data = {'vsahand': ['data/*.cfg', 'data/*.csv', 'data/*.suite']},
  entry_points = {
    'console_scripts': ['vsahand = vsahand.__main__:main', 'vsahand-calibrate = vsahand.calibrate:main']
  },
  include_package_data = True,

  keywords='variable stiffness actuator prosthetic hand grasp simulation',
  license='MIT',
  classifiers=['Development Status :: 4 - Beta',
    'Operating System :: OS Independent',
    'Intended Audience :: Science/Research',
    'Topic :: Scientific/Engineering',
    'Natural Language :: English',
    'Programming Language :: Python :: 3',
    'License :: OSI Approved :: MIT License'
    ]
  )
