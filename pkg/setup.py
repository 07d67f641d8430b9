from setuptools import setup, find_packages

setup(
    name="slowlight",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    package_data={"slowlight": ["scenarios/*.json"]},
    install_requires=[
        "astropy~=6.1.7",
        "click~=8.2.0",
        "joblib~=1.4.2",
        "numpy~=2.0.0",
        "pandas~=2.2.3",
        "scipy~=1.14.1",
        "setuptools~=70.0.0",
        "tabulate~=0.9.0"
    ],
    extras_require={
        "test": [
            "mpmath~=1.3.0",
            "pytest~=8.3.4",
            "sympy~=1.13.3",
        ],
    },
    entry_points={
        "console_scripts": [
            "slowlight=slowlight.commands.cli:cli",
        ],
    },
    description="Squeezing and entanglement of slow light propagating through an EIT medium",
    python_requires=">=3.10",
    include_package_data=True,
)
