from setuptools import setup, find_packages


with open("rsrp/version.py") as infile:
    exec(infile.read())

with open("README.md") as f:
    readme = f.read()


setup(
    name="rsrp-oracle",
    version=version,
    description="RSRP prediction from LTE drive-test data: per-cell path-loss fits and blind shadowing estimates.",
    long_description=readme,
    long_description_content_type="text/markdown",
    license="MIT",
    packages=find_packages(include=["rsrp", "rsrp.*"]),
    python_requires=">=3.8",
    zip_safe=True,
    install_requires=[
        'numpy>=1.20',
        'pandas>=1.5',
        'scipy>=1.7',
        'scikit-learn>=0.24',
        'joblib>=1.0',
        'tqdm>=4.62',
        'yacs>=0.1.8',
        'pyyaml>=5.4',
    ],
    extras_require={
        'test': ['pytest>=6.2'],
    },
    entry_points={
        'console_scripts': [
            'rsrp-oracle=rsrp.launch.main:main',
        ],
    },
)
