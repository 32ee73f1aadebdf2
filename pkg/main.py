# main.py
import argparse
import sys
from pathlib import Path

# Aggiunge il percorso del progetto a sys.path
project_path = Path(__file__).parent
sys.path.insert(0, str(project_path))

from analytic.reference_functions import list_references
from config.settings import config, setup_logging
from scripts.run_pipeline import run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="inflab", description="Verifiche numeriche per l'equazione infinito-laplaciana")
    commands = parser.add_subparsers(dest="command", required=True)

    run_cmd = commands.add_parser("run", help="esegue uno scenario da file JSON")
    run_cmd.add_argument("--config", required=True, type=Path)
    run_cmd.add_argument("--out", type=Path, default=None, help="directory degli artefatti")
    run_cmd.add_argument("--deterministic", action="store_true", help="ordine di calcolo fisso")

    commands.add_parser("list-references", help="elenca i dati al bordo disponibili")
    commands.add_parser("version", help="versione del pacchetto")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "version":
        print(f"inflab {config.VERSION}")
        return 0

    if args.command == "list-references":
        for name, description in list_references():
            print(f"{name:<16} {description}")
        return 0

    setup_logging()
    if args.out is None:
        config.setup_directories()
    print("Avvio scenario")
    return run(args.config, args.out, args.deterministic)


if __name__ == "__main__":
    sys.exit(main())
