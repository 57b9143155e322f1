from setuptools import setup, find_packages

setup(
    name="hopforce",
    version="1.0.0",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    python_requires=">=3.10",
    install_requires=[
        "networkx",
        "tqdm",
    ],
    extras_require={
        "nauty": ["pynauty"],  # faster canonical forms
        "test": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "hopforce=hopforce.main:main"
        ]
    },
)
