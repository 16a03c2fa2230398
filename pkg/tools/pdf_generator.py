"""
PDF Report Generator Tool
Renders replicate verification reports into a downloadable PDF
"""

import os
import sys
import traceback
from datetime import datetime
from typing import Optional

from fpdf import FPDF

from experiments.report import AggregateReport, StatReport


class VerificationReportPDF(FPDF):
    """PDF layout for a verification run: parameters, replicate table, verdict"""

    def __init__(self):
        super().__init__()
        self.set_auto_page_break(auto=True, margin=20)

    def header(self):
        self.set_fill_color(30, 41, 59)
        self.rect(0, 0, 210, 32, style='F')

        self.set_font('Helvetica', 'B', 22)
        self.set_text_color(255, 255, 255)
        self.set_y(6)
        self.cell(0, 10, 'hypermap', align='C', new_x='LMARGIN', new_y='NEXT')

        self.set_font('Helvetica', '', 10)
        self.set_text_color(180, 200, 220)
        self.cell(0, 6, 'Sampler Verification Report', align='C', new_x='LMARGIN', new_y='NEXT')

        self.ln(12)

    def footer(self):
        self.set_y(-15)
        self.set_draw_color(100, 116, 139)
        self.set_line_width(0.3)
        self.line(10, self.get_y(), 200, self.get_y())
        self.ln(3)
        self.set_font('Helvetica', 'I', 7)
        self.set_text_color(140, 140, 140)
        self.cell(0, 5, f'Page {self.page_no()} | Generated {datetime.now().strftime("%Y-%m-%d %H:%M")}', align='C')

    def add_section_header(self, title: str):
        self.ln(4)
        self.set_font('Helvetica', 'B', 13)
        self.set_text_color(30, 41, 59)
        self.cell(0, 8, self._safe(title), new_x='LMARGIN', new_y='NEXT')
        self.ln(2)

    def _label_style(self):
        self.set_font('Helvetica', 'B', 9)
        self.set_text_color(100, 116, 139)

    def _value_style(self):
        self.set_font('Helvetica', '', 9)
        self.set_text_color(30, 41, 59)

    def add_field_row(self, label: str, value: str, label2: Optional[str] = None, value2: Optional[str] = None):
        """One or two label/value pairs on a line"""
        pairs = [(label, value)] + ([(label2, value2)] if label2 else [])
        for i, (name, text) in enumerate(pairs):
            last = i == len(pairs) - 1
            self._label_style()
            self.cell(40, 7, self._safe(f"{name}:"))
            self._value_style()
            if last:
                self.cell(0, 7, self._safe(str(text if text is not None else '')), new_x='LMARGIN', new_y='NEXT')
            else:
                self.cell(55, 7, self._safe(str(text)))

    def add_replicate_table(self, replicates: list[StatReport]):
        """Shaded table: seed, sample size, statistic, p-value, verdict"""
        widths = (45, 25, 40, 40, 40)
        self._label_style()
        for w, title in zip(widths, ("Seed", "n", "Statistic", "p-value", "Result")):
            self.cell(w, 7, title)
        self.ln(7)
        self._value_style()
        for i, rep in enumerate(replicates):
            fill = i % 2 == 0
            self.set_fill_color(248, 250, 252)
            self.set_text_color(30, 41, 59)
            pvalue = f"{rep.pvalue:.4g}" if rep.pvalue is not None else "-"
            cells = (str(rep.seed), str(rep.sample_size), f"{rep.test} {rep.statistic:.4g}", pvalue)
            for w, text in zip(widths, cells):
                self.cell(w, 7, self._safe(text), fill=fill)
            if rep.passed:
                self.set_text_color(22, 163, 74)
            else:
                self.set_text_color(185, 28, 28)
            self.cell(widths[-1], 7, "pass" if rep.passed else "FAIL", fill=fill, new_x='LMARGIN', new_y='NEXT')
        self.set_text_color(30, 41, 59)
        self.ln(2)

    def add_verdict_banner(self, report: AggregateReport):
        self.ln(3)
        if report.passed:
            self.set_fill_color(34, 197, 94)
            label = f"PASS: {report.passes} of {len(report.replicates)} replicates"
        else:
            self.set_fill_color(180, 83, 9)
            label = f"FAIL: {report.passes} of {len(report.replicates)} replicates (need {report.required})"
        y = self.get_y()
        self.rect(10, y, 190, 18, style='F')
        self.set_text_color(255, 255, 255)
        self.set_font('Helvetica', 'B', 14)
        self.set_xy(10, y + 5)
        self.cell(190, 8, self._safe(label), align='C')
        self.set_y(y + 23)
        self.set_text_color(30, 41, 59)

    def add_notes(self, notes: list[str]):
        self.set_font('Helvetica', '', 9)
        self.set_text_color(51, 65, 85)
        for note in notes:
            self.set_x(self.l_margin)
            self.multi_cell(w=185, h=5, text=self._safe(f"  -  {note}"))

    @staticmethod
    def _safe(text: str) -> str:
        """Make text safe for Helvetica (latin-1 only)"""
        if not text:
            return ""
        replacements = {
            '—': '--', '–': '-', 'λ': 'lambda', 'μ': 'mu',
            '≥': '>=', '≤': '<=', 'χ': 'chi',
        }
        for old, new in replacements.items():
            text = text.replace(old, new)
        return text.encode('latin-1', errors='replace').decode('latin-1')


def generate_pdf_report(report: AggregateReport, output_path: Optional[str] = None) -> Optional[str]:
    """
    Render an aggregated verification report

    Returns:
        Path to the generated PDF, or None if generation fails
    """
    try:
        pdf = VerificationReportPDF()
        pdf.add_page()

        pdf.add_section_header(f"Experiment: {report.name}")
        items = sorted(report.params.items())
        for i in range(0, len(items), 2):
            (k1, v1), rest = items[i], items[i + 1: i + 2]
            if rest:
                pdf.add_field_row(k1, _format(v1), rest[0][0], _format(rest[0][1]))
            else:
                pdf.add_field_row(k1, _format(v1))
        pdf.add_field_row("Master seed", str(report.seed), "Threshold", _format(report.replicates[0].threshold))

        pdf.add_section_header("Replicates")
        pdf.add_replicate_table(report.replicates)
        pdf.add_verdict_banner(report)

        notes = sorted({n for r in report.replicates for n in r.notes})
        if notes:
            pdf.add_section_header("Notes")
            pdf.add_notes(notes)

        if output_path is None:
            ts = datetime.now().strftime("%Y%m%d_%H%M%S")
            output_path = f"hypermap_{report.name}_{ts}.pdf"
        os.makedirs(os.path.dirname(os.path.abspath(output_path)), exist_ok=True)
        pdf.output(output_path)
        return output_path

    except Exception as e:
        print(f"⚠️ PDF generation error: {e}", file=sys.stderr)
        traceback.print_exc()
        return None


def _format(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)
