"""Compare the numba and numpy Ryser kernels; prints CSV to stdout."""

from nwitness.bench import main

if __name__ == "__main__":
    main()
