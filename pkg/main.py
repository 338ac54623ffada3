import sys

from dyadic_orbits.cli import run_cli


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
