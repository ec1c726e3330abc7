"""UI components for the widthforge explorer"""

import streamlit as st
import pandas as pd
from typing import Dict, Optional

from core.branch_solver import WidthReport
from core.graph import Graph
from core.tree_decomp import TreeDecomposition


def get_premium_css(theme: str = "light") -> str:
    """
    Get the explorer CSS

    Args:
        theme: 'light' or 'dark'

    Returns:
        CSS string
    """
    if theme == "dark":
        background, text, card = "#0D0F16", "#ECECEC", "rgba(255, 255, 255, 0.06)"
    else:
        background, text, card = "#F7F8FC", "#1E1E2F", "rgba(255, 255, 255, 0.85)"
    return f"""
    <style>
        :root {{
            --bg-primary: {background};
            --text-primary: {text};
            --bg-glass: {card};
            --accent: #6A5CFF;
        }}
        .stApp {{ background: var(--bg-primary); color: var(--text-primary); }}
        .premium-header {{
            font-size: 2.8rem;
            font-weight: 800;
            background: linear-gradient(135deg, #6A5CFF 0%, #AD7BFF 100%);
            -webkit-background-clip: text;
            -webkit-text-fill-color: transparent;
            text-align: center;
            margin: 1.5rem 0 0.25rem 0;
        }}
        .premium-subheader {{ text-align: center; opacity: 0.7; margin-bottom: 1.5rem; }}
        .glass-card {{
            background: var(--bg-glass);
            border-radius: 14px;
            padding: 1rem 1.25rem;
            margin: 0.5rem 0;
            box-shadow: 0 4px 18px rgba(0, 0, 0, 0.08);
        }}
        .metric-card {{
            background: var(--bg-glass);
            border-radius: 12px;
            padding: 0.75rem;
            text-align: center;
            margin-bottom: 0.5rem;
        }}
        .metric-value {{ font-size: 1.5rem; font-weight: 700; color: var(--accent); }}
        .metric-label {{ font-size: 0.85rem; opacity: 0.7; }}
    </style>
    """


def _metric(value, label: str, container=st):
    container.markdown(
        f'<div class="metric-card"><div class="metric-value">{value}</div><div class="metric-label">{label}</div></div>',
        unsafe_allow_html=True
    )


def render_graph_stats(graph: Graph, title: str = "Graph"):
    """
    Render vertex, edge and degree counts in the sidebar

    Args:
        graph: Loaded graph
        title: Section heading
    """
    st.sidebar.markdown(f"### 📊 {title}")
    col1, col2 = st.sidebar.columns(2)
    with col1:
        _metric(graph.n, "Vertices")
    with col2:
        _metric(graph.m, "Edges")
    top = max((graph.degree(v) for v in graph.vertices), default=0)
    _metric(top, "Max degree", st.sidebar)


def render_width_report(report: WidthReport, label: str):
    """
    Render a width report with its per-edge cut table

    Args:
        report: Result of width_of or solve_branchwidth
        label: Name of the evaluated parameter
    """
    st.markdown(f"### 🌳 {label}")
    col1, col2, col3 = st.columns(3)
    with col1:
        _metric(report.value, "Width")
    with col2:
        _metric(report.witness.num_nodes, "Tree nodes")
    with col3:
        _metric(report.witness.ground_size, "Elements")

    if report.edge_values:
        rows = [{'tree edge': f"{a + 1}-{b + 1}", 'value': value} for (a, b), value in report.edge_values]
        with st.expander("Per-edge cut values", expanded=False):
            st.dataframe(pd.DataFrame(rows), use_container_width=True)


def render_td_summary(td: TreeDecomposition, stats: Optional[Dict] = None):
    """
    Render a compiled tree decomposition and its statistics

    Args:
        td: Tree decomposition
        stats: Compiler statistics dictionary
    """
    st.markdown("### 🧩 Tree decomposition")
    col1, col2 = st.columns(2)
    with col1:
        _metric(td.num_nodes, "Bags")
    with col2:
        _metric(td.max_bag_size, "Largest bag")

    if stats:
        with st.expander("Compiler statistics", expanded=True):
            st.dataframe(pd.DataFrame([{'key': key, 'value': str(value)} for key, value in stats.items()]),
                         use_container_width=True)
    with st.expander("Bags", expanded=False):
        st.dataframe(pd.DataFrame([{'bag': i + 1, 'vertices': ' '.join(str(v + 1) for v in bag)}
                                   for i, bag in enumerate(td.bags)]), use_container_width=True)


def render_error_message(error: str, details: Optional[str] = None):
    """
    Render error message

    Args:
        error: Error message
        details: Optional detailed error information
    """
    st.markdown(
        f'<div class="glass-card" style="border-left: 4px solid #FF6B6B;"><strong style="color: #FF6B6B;">❌ {error}</strong></div>',
        unsafe_allow_html=True
    )
    if details:
        with st.expander("Error Details"):
            st.code(details)


def render_success_message(message: str):
    st.markdown(
        f'<div class="glass-card" style="border-left: 4px solid #39F3C7;"><strong style="color: #1FA884;">✅ {message}</strong></div>',
        unsafe_allow_html=True
    )


def render_info_message(message: str):
    st.markdown(
        f'<div class="glass-card" style="border-left: 4px solid #6A5CFF;"><strong style="color: #6A5CFF;">ℹ️ {message}</strong></div>',
        unsafe_allow_html=True
    )


def render_warning_message(message: str):
    st.markdown(
        f'<div class="glass-card" style="border-left: 4px solid #FFA726;"><strong style="color: #FFA726;">⚠️ {message}</strong></div>',
        unsafe_allow_html=True
    )
