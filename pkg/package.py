from pathlib import Path
from shutil import copytree, ignore_patterns, rmtree
import zipapp

SRC_DIR = 'app/'
DEST_ROOT_DIR = 'target/orbifold-ht/'
DEST_DIR = 'target/orbifold-ht/app'
ARCHIVE = 'target/orbifold-ht.pyz'
ENTRY_POINT = 'app.orbifold_cli:run'

if Path(DEST_DIR).exists() and Path(DEST_DIR).is_dir():
    rmtree(DEST_DIR)

copytree(SRC_DIR, DEST_DIR, ignore=ignore_patterns('__pycache__', '*.pyc'))

zipapp.create_archive(DEST_ROOT_DIR, ARCHIVE, interpreter='/usr/bin/env python3', main=ENTRY_POINT)
