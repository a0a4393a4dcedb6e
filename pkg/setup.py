from setuptools import setup, find_packages

setup(
    name="avnmp",
    py_modules=["run"],
    version="0.1",
    description="Active Virtual Network Management Prediction: optimistic network state prediction",
    packages=find_packages(exclude=["tests*"]),
    install_requires=[
        "networkx>=2.5",
        "numpy>=1.19",
        "omegaconf>=2.1",
        "pandas>=1.2",
        "PyYAML>=5.3",
        "tqdm>=4.56",
    ],
    include_package_data=True,
    license="Apache License",
)
