from setuptools import setup, find_packages

setup(
    name="wmCheck",
    version="0.1.0",
    packages=find_packages(where='wmCheck'),
    package_dir={'': 'wmCheck'},
    py_modules=['main'],
    package_data={'': ['templates/*.json', 'templates/*.ctab']},
    install_requires=[
        "numpy>=1.20.0",
        "pandas>=2.0.0",
        "pyyaml>=5.4",
        "colorama>=0.4.4",
        "sympy>=1.9",
        "mpmath>=1.2",
    ],
    extras_require={
        "test": ["pytest>=7.0", "hypothesis>=6.0"],
    },
    entry_points={
        "console_scripts": [
            "wmcheck=main:main_func",
            "wmcheck-init=main:create_default_config",
        ],
    },
    author="wmCheck developers",
    description="Exact character-table and enumeration checks for word maps on finite groups",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires='>=3.9',
)
