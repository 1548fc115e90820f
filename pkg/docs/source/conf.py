# Configuration file for the Sphinx documentation builder.
#
# This file only contains a selection of the most common options. For a full
# list see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys
from OpinionEcosystem import __version__
sys.path.insert(0, os.path.abspath('../../OpinionEcosystem/'))


# -- Project information -----------------------------------------------------

project = 'OpinionEcosystem'
copyright = '2026, OpinionEcosystem developers'
author = 'OpinionEcosystem developers'

# The full version, including alpha/beta/rc tags
release = __version__


# -- General configuration ---------------------------------------------------

sys.path.append(os.path.abspath("./_ext"))

extensions = [
    'sphinx.ext.todo',
    'sphinx.ext.viewcode',
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'directives',
]

templates_path = ['_templates']
exclude_patterns = []


# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
