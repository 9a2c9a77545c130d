import sys

from tools.cli import main as cli_main

if __name__ == "__main__":
    # python main.py analyze data/systems/ex1.sys --oracle
    # python main.py randcheck --group so --n 5 --trials 500 --seed 42
    # python main.py examples
    sys.exit(cli_main())
