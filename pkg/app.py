"""
widthforge explorer
Streamlit front end over the width toolkit:
- Generate a family member or upload a DIMACS graph
- Solve an exact f-branch-width with its witness decomposition
- Compile a tree decomposition from an optimal mim-width decomposition
- Light/dark theme toggle
"""

import logging
import streamlit as st
from dotenv import load_dotenv
from typing import Optional

from core.branch_solver import solve_branchwidth
from core.compiler import compile_tree_decomposition
from core.errors import InputError, SizeCapError, WidthForgeError
from core.generators import FAMILIES, FamilySpec, generate
from core.graph import Graph, line_graph
from ui.components import (
    get_premium_css, render_error_message, render_graph_stats, render_info_message,
    render_success_message, render_td_summary, render_warning_message, render_width_report
)
from utils.formats import parse_graph
from utils.helpers import get_default_seed, get_log_level

# Load environment variables
load_dotenv()

logging.basicConfig(level=get_log_level())
logger = logging.getLogger(__name__)

PARAMETERS = {
    'sim': 'sim-width',
    'mim': 'mim-width',
    'rank': 'rank-width',
    'mm': 'mm-width',
    'eta': 'branch-width',
}

# -------------------------------
# PAGE CONFIGURATION
# -------------------------------
st.set_page_config(
    page_title="widthforge",
    page_icon="🌳",
    layout="wide",
    initial_sidebar_state="expanded"
)


def apply_theme():
    theme = st.session_state.get("theme", "light")
    st.markdown(get_premium_css(theme), unsafe_allow_html=True)


def initialize_session_state():
    defaults = {
        "graph": None,
        "graph_name": "",
        "report": None,
        "report_label": "",
        "td": None,
        "td_stats": None,
        "theme": "light",
    }
    for key, default in defaults.items():
        if key not in st.session_state:
            st.session_state[key] = default


# -------------------------------
# GRAPH LOADING
# -------------------------------
def load_family(family: str, raw_params: str, seed: int) -> Optional[Graph]:
    try:
        params = tuple(int(p) for p in raw_params.replace(',', ' ').split())
        spec = FamilySpec(family, params, seed if family == 'random-chordal' else None)
        graph = generate(spec)
        st.session_state.graph_name = spec.describe()
        return graph
    except (ValueError, InputError) as e:
        logger.error(f"Error generating {family}: {str(e)}")
        render_error_message("Could not generate graph", str(e))
        return None


def load_upload(uploaded) -> Optional[Graph]:
    try:
        graph = parse_graph(uploaded.read().decode('utf-8'))
        st.session_state.graph_name = uploaded.name
        return graph
    except (UnicodeDecodeError, InputError) as e:
        logger.error(f"Error parsing {uploaded.name}: {str(e)}")
        render_error_message("Could not parse graph file", str(e))
        return None


def set_graph(graph: Optional[Graph]):
    if graph is None:
        return
    st.session_state.graph = graph
    st.session_state.report = None
    st.session_state.td = None
    st.session_state.td_stats = None


# -------------------------------
# ACTIONS
# -------------------------------
def handle_solve(kind: str, on_line_graph: bool):
    graph = st.session_state.graph
    try:
        target = line_graph(graph) if on_line_graph else graph
        with st.spinner(f"🔍 Solving {PARAMETERS[kind]}..."):
            report = solve_branchwidth(target, kind)
        st.session_state.report = report
        st.session_state.report_label = f"{PARAMETERS[kind]}{' of L(G)' if on_line_graph else ''}"
    except SizeCapError as e:
        logger.error(f"Refused {kind}: {str(e)}")
        render_warning_message(str(e))
    except WidthForgeError as e:
        logger.error(f"Error solving {kind}: {str(e)}")
        render_error_message("Solver failed", str(e))


def handle_compile():
    graph = st.session_state.graph
    try:
        with st.spinner("🧩 Compiling tree decomposition..."):
            best = solve_branchwidth(graph, 'mim')
            td, stats = compile_tree_decomposition(graph, best.witness, check=True)
        st.session_state.td = td
        st.session_state.td_stats = stats
        if stats['alpha_bound_holds']:
            render_success_message(f"Bag independence number {stats['alpha']} below bound {stats['alpha_bound']}")
        else:
            render_warning_message(f"Bag independence number {stats['alpha']} misses bound {stats['alpha_bound']}")
    except SizeCapError as e:
        logger.error(f"Refused compile: {str(e)}")
        render_warning_message(str(e))
    except WidthForgeError as e:
        logger.error(f"Error compiling: {str(e)}")
        render_error_message("Compiler failed", str(e))


# -------------------------------
# MAIN APPLICATION
# -------------------------------
def main():
    initialize_session_state()
    apply_theme()

    st.markdown('<div class="premium-header">widthforge</div>', unsafe_allow_html=True)
    st.markdown('<div class="premium-subheader">Exact width parameters and decomposition transforms</div>',
                unsafe_allow_html=True)

    with st.sidebar:
        if st.button("🌗 Toggle Theme", use_container_width=True):
            st.session_state.theme = "dark" if st.session_state.theme == "light" else "light"
            st.rerun()
        st.divider()

        source = st.radio("Graph source", ["Family", "DIMACS file"], horizontal=True)
        if source == "Family":
            family = st.selectbox("Family", sorted(FAMILIES), index=sorted(FAMILIES).index('cycle'))
            raw_params = st.text_input("Parameters", "5")
            seed = st.number_input("Seed", value=get_default_seed(), step=1)
            if st.button("🚀 Generate", use_container_width=True, type="primary"):
                set_graph(load_family(family, raw_params, int(seed)))
        else:
            uploaded = st.file_uploader("📤 Upload graph", type=["gr", "dimacs", "txt"])
            if uploaded and st.button("🚀 Load", use_container_width=True, type="primary"):
                set_graph(load_upload(uploaded))

        st.divider()
        kind = st.selectbox("Parameter", list(PARAMETERS), format_func=PARAMETERS.get)
        on_line_graph = st.checkbox("Evaluate on the line graph", False)

        if st.session_state.graph is not None:
            render_graph_stats(st.session_state.graph, st.session_state.graph_name or "Graph")

    graph = st.session_state.graph
    if graph is None:
        render_info_message("👈 Generate or upload a graph to begin.")
        return

    col1, col2 = st.columns(2)
    with col1:
        if st.button("🌳 Solve exact width", use_container_width=True, type="primary"):
            handle_solve(kind, on_line_graph)
    with col2:
        if st.button("🧩 Compile tree decomposition", use_container_width=True):
            handle_compile()

    if st.session_state.report is not None:
        render_width_report(st.session_state.report, st.session_state.report_label)
    if st.session_state.td is not None:
        render_td_summary(st.session_state.td, st.session_state.td_stats)


# Run app
if __name__ == "__main__":
    main()
