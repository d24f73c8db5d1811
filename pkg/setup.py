"""Setup script for SMLAB package."""

import smlab
import setuptools


name = smlab.__name__
version = smlab.__version__
author = smlab.__author__
author_email = smlab.__email__
description = smlab.__doc__
long_description = open('README.md', 'r').read()
long_description_content_type = 'text/markdown'
license = smlab.__license__
url = f'https://github.com/t3eHawk/{name}'
python_requires = '>=3.9'
install_requires = open('requirements.txt').read().splitlines()
extras_require = {'test': ['pytest>=7']}
packages = setuptools.find_packages(exclude=['tests'])
entry_points = {'console_scripts': ['smlab=smlab.main.console:main']}
classifiers = ['Programming Language :: Python :: 3.9',
               'Programming Language :: Python :: 3.11',
               'License :: OSI Approved :: MIT License',
               'Operating System :: OS Independent']


setuptools.setup(name=name,
                 version=version,
                 author=author,
                 author_email=author_email,
                 description=description,
                 long_description=long_description,
                 long_description_content_type=long_description_content_type,
                 license=license,
                 url=url,
                 python_requires=python_requires,
                 install_requires=install_requires,
                 extras_require=extras_require,
                 packages=packages,
                 entry_points=entry_points,
                 classifiers=classifiers)
