from .cube_file import read_cube, write_cube
from .history_csv import write_history
from .library_csv import read_library, write_library
from .model_file import read_model, write_model
from .pgm import export_map

__all__ = [
    "export_map",
    "read_cube",
    "read_library",
    "read_model",
    "write_cube",
    "write_history",
    "write_library",
    "write_model",
]
