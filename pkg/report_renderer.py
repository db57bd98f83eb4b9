"""
Report renderer for identity checks, lifts and growth estimates
Formats results as aligned terminal tables with colored PASS/FAIL markers
"""

from typing import Dict, List, Sequence

from colorama import Fore, Style, just_fix_windows_console

from config import DISPLAY_CONFIG
from growth import GrowthEstimate
from series_identities import IdentityReport

just_fix_windows_console()


class ReportRenderer:
    """Renders verification results as plain-text tables"""

    def __init__(self, use_colors: bool = None):
        self.use_colors = DISPLAY_CONFIG['use_colors'] if use_colors is None else use_colors
        self.digits = DISPLAY_CONFIG['float_digits']
        self.colors = DISPLAY_CONFIG['colors']

    def get_color_code(self, color_name: str) -> str:
        """Convert color name to ANSI color code"""
        color_map = {
            'black': Fore.BLACK,
            'red': Fore.RED,
            'green': Fore.GREEN,
            'yellow': Fore.YELLOW,
            'blue': Fore.BLUE,
            'magenta': Fore.MAGENTA,
            'cyan': Fore.CYAN,
            'white': Fore.WHITE,
        }
        return color_map.get(color_name, '')

    def paint(self, text: str, role: str) -> str:
        if not self.use_colors:
            return text
        return f"{self.get_color_code(self.colors.get(role, ''))}{text}{Style.RESET_ALL}"

    def verdict(self, passed: bool, width: int = 4) -> str:
        text = f"{'PASS' if passed else 'FAIL':<{width}}"
        return self.paint(text, 'pass' if passed else 'fail')

    def number(self, value: float) -> str:
        return f"{value:.{self.digits}g}"

    def render_identity_reports(self, reports: Sequence[IdentityReport]) -> str:
        header = f"{'identity':<18} {'lhs':>20} {'rhs':>20} {'gap':>10} {'tail':>10} {'terms':>6}  result"
        lines = [self.paint(header, 'header'), '-' * len(header)]
        for report in reports:
            lines.append(f"{report.name:<18} {self.number(report.lhs):>20} {self.number(report.rhs):>20} "
                         f"{report.abs_gap:>10.2e} {report.tail_bound:>10.2e} {report.terms:>6}  "
                         f"{self.verdict(report.passed)}")
            if report.aux_gap is not None:
                lines.append(f"  auxiliary gap {report.aux_gap:.2e}")
            if report.tail_kind != 'rigorous':
                lines.append(self.paint(f"  tail bound is {report.tail_kind}", 'warning'))
            for note in report.notes:
                lines.append(self.paint(f"  {note}", 'warning'))
        return '\n'.join(lines)

    def render_lift(self, rows: List[Dict]) -> str:
        """Rows with keys r, a_base, a_cover, b_base, b_cover"""
        header = f"{'r':>4} {'a base':>14} {'a cover':>14} {'b base':>14} {'b cover':>14}  match"
        lines = [self.paint(header, 'header'), '-' * len(header)]
        for row in rows:
            match = row['a_base'] == row['a_cover'] and row['b_base'] == row['b_cover']
            lines.append(f"{row['r']:>4} {str(row['a_base']):>14} {str(row['a_cover']):>14} "
                         f"{str(row['b_base']):>14} {str(row['b_cover']):>14}  {self.verdict(match)}")
        return '\n'.join(lines)

    def render_estimate(self, estimate: GrowthEstimate, label: str) -> str:
        start, end = estimate.window
        return (f"{self.paint(label, 'header')} = {self.number(estimate.value)}  "
                f"({estimate.method}, r in [{start}, {end}], residual {estimate.residual:.2e})")
