from setuptools import setup, find_packages

setup(
    name="llm-slice-sim",
    version="1.0.0",
    description="LLM Slice Simulator - dynamic 5G downlink slicing for streamed LLM responses",
    packages=find_packages(include=["llm_slice*"]),
    include_package_data=True,
    install_requires=[
        "tqdm",
        "scipy",
        "numpy",
        "click",
    ],
    extras_require={
        "dev": ["pytest", "pytest-cov", "hypothesis", "black", "isort"],
    },
    entry_points={
        "console_scripts": ["llmslice = llm_slice.cli:llmslice"],
    },
    python_requires=">=3.9,<3.14",
    package_data={
        "": ["*.json", "*.csv"],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
