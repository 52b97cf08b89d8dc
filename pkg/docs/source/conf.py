# Sphinx settings for dirsimplicial docs. Module pages are in dirsimplicial.*.rst files next to this one.

import sys
import pathlib
import datetime

project = "dirsimplicial"
author = "dirsimplicial developers"
github_user = "dirsimplicial"

# Library importable without install
script_dir = pathlib.Path(__file__).resolve()
root_path = script_dir.parents[2]

for path in [script_dir.parent, root_path, root_path / project]:
    if path.as_posix() not in sys.path:
        sys.path.insert(0, path.as_posix())

copyright = f"{datetime.datetime.now().year}, {author}"
release = datetime.datetime.now().strftime("%d-%m-%Y")

master_doc = "index"
source_suffix = [".rst", ".md"]

html_theme_options = {
    "github_user": github_user,
    "github_repo": project,
    "github_banner": True,
}

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
    "sphinx.ext.githubpages",
    "sphinx.ext.imgmath",
    "sphinx.ext.autosectionlabel",
]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
    "scipy": ("https://docs.scipy.org/doc/scipy", None),
    "pandas": ("https://pandas.pydata.org/docs", None),
}

# Config values docstrings use these sections
napoleon_custom_sections = [
    ("Types", "returns_style"),
    ("Type", "returns_style"),
    ("Options", "returns_style"),
    ("Default", "returns_style"),
    ("Examples", "returns_style"),
]

smartquotes = False
autosectionlabel_prefix_document = True

html_theme = "alabaster"
html_sidebars = {"**": ["navi.html", "searchbox.html"]}
templates_path = ["_templates"]
html_static_path = ["_static"]
exclude_patterns = []

html_css_files = [
    "https://malachov.github.io/mypythontools/content/sphinx-alabaster-css/custom.css",
]

autodoc_typehints = "description"
autodoc_member_order = "bysource"
