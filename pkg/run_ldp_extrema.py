import sys

from dotenv import load_dotenv

from src.cli_io.cli import main

load_dotenv()


if __name__ == "__main__":
    sys.exit(main())
