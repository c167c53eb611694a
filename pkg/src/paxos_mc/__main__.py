"""Entry point for `python -m paxos_mc`."""

from cli.main import main

if __name__ == "__main__":
    main()
