#!/usr/bin/env python3
"""Setup script for cu-factor"""

from setuptools import setup, find_packages

setup(
    name="cu-factor",
    version="0.1.0",
    packages=find_packages(include=["cuf", "cuf.*"]),
    python_requires=">=3.9",
    entry_points={"console_scripts": ["cu-factor=cuf.cli.main:main"]},
)
