"""
Report rendering for the motion table: markdown text and its HTML form
"""
import markdown

from reference_tables import expected_cell, get_table1_rows


def _fmt(value) -> str:
    if value is None:
        return 'n/a'
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def generate_table1_report(rows):
    """
    Generate a markdown report of the motion table.

    Args:
        rows: Computed rows from analysis.table1_rows()

    Returns:
        str: Markdown formatted report
    """
    if not rows:
        return "No scenarios evaluated.\n"

    report = "# Type of motion\n\n"
    report += "| Scheme | x | gamma | Motion | Delta | eta |\n"
    report += "|---|---|---|---|---|---|\n"
    for row in rows:
        report += (f"| {row['scheme']} | {_fmt(row['x'])} | {_fmt(row['gamma'])} "
                   f"| {row['motion']} | {row['delta_cell']} | {row['eta_cell']} |\n")

    references = {ref.get('scheme'): ref for ref in get_table1_rows()}
    for row in rows:
        report += f"\n#### {row['scheme'].upper()}\n"
        reference = references.get(row['scheme'])
        if reference:
            report += (f"- **Reference:** {reference.get('label', row['scheme'])}; "
                       f"{reference.get('delta_text', 'n/a')}, {reference.get('eta_text', 'n/a')}\n")
        report += f"- **Motion:** {row['motion']}\n"
        report += f"- **Minimized residual:** `{_fmt(row['residual_sup'])}`\n"
        report += f"- **Efficiency (closed form):** `{_fmt(row['eta_closed'])}`\n"
        report += f"- **Delta/h (closed form):** `{_fmt(row['delta_over_h_closed'])}`\n"
        report += f"- **Efficiency (definition):** `{_fmt(row['eta_definitional'])}`\n"
        report += f"- **Delta/h (definition):** `{_fmt(row['delta_over_h_definitional'])}`\n"
        expected = expected_cell(row['scheme'], 'motion')
        if expected is not None and expected != row['motion']:
            report += f"- **Expected motion:** ⚠️ {expected}\n"

    return report


def render_html(md_content: str) -> str:
    """Markdown to HTML with table support"""
    return markdown.markdown(md_content, extensions=['tables', 'fenced_code'])
