import itertools
import logging
import os
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from rankmetric.simulation import Simulation


log = logging.getLogger("rankLogger")


def generate_report(simulation: "Simulation") -> str:
    """
    Writes the Markdown summary of a finished simulation into its run directory.

    Returns:
        Path of the report.
    """
    if simulation.results is None:
        raise ValueError("Simulation has no results, run it first")

    registry = simulation.registry
    save_dir = registry.abs_dir(registry.get("report"))
    log.info(f"Saving report into {save_dir}")

    code = simulation.code
    report = MarkdownReport(out_name=os.path.basename(registry.get("report")))
    report.add_title(f"Simulation Report - {simulation.name}", "")
    report.add_introduction(
        {
            "name": simulation.name,
            "code": f"({code.n}, {code.k}) Gabidulin code over GF(2^{code.m})",
            "field": code.field.spec.to_text(),
            "mode": simulation.mode,
            "trials": simulation.trials,
            "seed": simulation.seed,
        }
    )

    report.add_heading("Objectives", level=2)
    radius = "2ε + μ + δ ≤ d - 1" if simulation.mode == "kk" else "τ ≤ t"
    report.add_list(
        [
            f"Measure exact recovery of the decoder for every configured error budget "
            f"(decoding radius {radius}, d = {code.d}, t = {code.t}).",
            "Count declared decoding failures and miscorrections separately.",
        ]
    )

    report.add_heading("Results", level=2)
    table = simulation.results
    rows = [list(table.columns)]
    for record in table.itertuples(index=False):
        rows.append([f"{v:.4f}" if isinstance(v, float) else v for v in record])
    report.add_table(rows)

    total = int(table["trials"].sum())
    report.add_text(
        [
            f"{int(table['successes'].sum())} of {total} trials recovered the transmitted "
            f"codeword, {int(table['failures'].sum())} failures were declared and "
            f"{int(table['miscorrections'].sum())} miscorrections occurred."
        ]
    )
    files = [f"`{registry.rel(registry.get(key))}`" for key in ("results", "config")
             if registry.file_exists(key)]
    if files:
        report.add_heading("Files", level=2)
        report.add_list(files)

    report.table_of_contents()
    report.save(save_dir)
    return os.path.join(save_dir, report.out_name)


class MarkdownReport:
    """Class to generate a Markdown report from a simulation."""

    def __init__(self, out_name="report.md"):
        self.out_name = out_name
        self.toc = []
        self.has_title = True
        self.has_introduction = False
        self.markdown = []

    def add_introduction(self, adict):
        """Generate document header from dictionary."""
        first = (
            f"**Simulation:** {adict['name']}  \n"
            f"**Code:** {adict['code']}  \n"
            f"**Field:** {adict['field']}  \n"
            f"**Mode:** {adict['mode']}  \n"
            f"**Trials per budget:** {adict['trials']}  \n"
            f"**Seed:** {adict['seed']}\n\n"
        )

        self.has_introduction = True
        self.markdown.append(first)
        return first

    def add_text(self, text):
        """
        Text should be a list of strings where each string will be on its own
        line. Each add_text command represents a paragraph.

        Args:
            text (list): lines to write
        """
        self.markdown.append("  ".join(text) + "\n\n")

    def add_heading(self, title, level=1, text="", add_toc=True):
        if isinstance(text, str):
            text = [text]
        cell = []
        level_string = f"{level * '#'}"
        locator = title.lower().replace(" ", "_")
        sub_heading = f'{level_string} {title} <a name="{locator}"></a>\n'
        cell.append(sub_heading)
        try:
            for item in list(text):
                cell.append(item)
        except Exception as ex:
            raise RuntimeWarning(f"Unable to add document subhead, text must be iterable. {ex}")
        self.markdown.append("\n".join(cell) + "\n")

        if add_toc:
            self.toc.append((title, level, locator))

    def add_list(self, _list):
        cell = []
        for item in _list:
            cell.append(f"* {item}")
        self.markdown.append("\n".join(cell) + "\n\n")

    def add_title(self, title, text):
        self.has_title = True
        self.add_heading(title, 1, text, add_toc=False)

    def table_of_contents(self):
        """Generates table of contents based on contents of document."""
        if len(self.toc) == 0:
            return
        toc = ["# Table of Contents"]

        for i, elem in enumerate(self.toc):
            title, level, locator = elem
            space = "   " * (level - 1)
            toc.append(f"{space}1. [{title}](#{locator})")
        insert_loc = 1 if self.has_title else 0
        self.markdown.insert(insert_loc, "\n".join(toc) + "\n\n")

    def add_table(self, data, use_header=True):
        """
        Generates an HTML table.

        Args:
           data List[Tuple[str]]: should be (nrows, ncols) in size. all rows
            should be the same sizes
        """
        table = ['<div class="table table-striped">', "<table>"]

        def make_header(row_):
            header = ["<tr>"]
            for item in row_:
                header.append(f"<th>{item}</th>")
            header.append("</tr>")
            return "\n".join(header)

        def add_row(row_):
            table_row = ["<tr>"]
            for item in row_:
                table_row.append(f"<td>{item}</td>")
            table_row.append("</tr>")
            return "\n".join(table_row)

        for i, row in enumerate(data):
            if i == 0 and use_header:
                table.append(make_header(row))
            else:
                table.append(add_row(row))
        table.append("</table>")
        table.append("</div>")
        table = "\n".join(table)
        self.markdown.append(table + "\n\n")

    def save(self, save_dir):
        output = list(itertools.chain.from_iterable(self.markdown))
        full_md_fname = os.path.join(save_dir, self.out_name)
        with open(full_md_fname, "w") as f:
            f.writelines(output)
