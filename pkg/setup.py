from setuptools import setup, find_packages
import pkg_resources
import dirsimplicial

version = dirsimplicial.__version__

with open("README.md") as readme_file:
    readme = readme_file.read()

with open("requirements.txt") as f:
    used_requirements = [str(requirement) for requirement in pkg_resources.parse_requirements(f)]

setup(
    name="dirsimplicial",
    version=version,
    license="mit",
    install_requires=used_requirements,
    description="Directed simplicial complexes, colour refinement and directed simplicial neural networks.",
    long_description_content_type="text/markdown",
    long_description=readme,
    packages=find_packages(exclude=("tests", "examples")),
    include_package_data=True,
    platforms="any",
    python_requires=">=3.9",
    entry_points={"console_scripts": ["dirsimplicial=dirsimplicial.main:main"]},
    classifiers=[
        "Programming Language :: Python",
        "Development Status :: 3 - Alpha",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Natural Language :: English",
        "Environment :: Other Environment",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Software Development :: Libraries :: Python Modules",
        "Intended Audience :: Science/Research",
        "Intended Audience :: Developers",
    ],
    extras_require={},
)
