from setuptools import setup

if __name__ == "__main__":
    setup(
        name="rankmetric",
        use_scm_version=True,
        setup_requires=["setuptools-scm"],
    )
