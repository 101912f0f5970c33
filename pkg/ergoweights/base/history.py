from collections import defaultdict


class History:
    """A class to manage the rows recorded by a solver along its run

    Parameters
    ----------
    minimum_col_width : `int`, default=8
        Minimum of the column width for printing history

    print_order : `list`, default=None
        Gives in order the elements to be printed in print_history.
        If None, then print_order = ["n_row", "name", "value"]
    """

    def __init__(self, minimum_col_width=8, print_order=None):
        if print_order is None:
            print_order = ["n_row", "name", "value"]
        self.minimum_col_width = minimum_col_width
        self.print_order = print_order

        # Instantiate values of the history
        self.clear()

        # Default print style of history values. Default is %.2e
        print_style = defaultdict(lambda: "%.2e")
        print_style["n_row"] = "%d"
        print_style["name"] = "%s"
        print_style["edge"] = "%s"
        print_style["status"] = "%s"
        print_style["value"] = "%g"
        self.print_style = print_style

        # Attributes that will be instantiated afterwards
        self.n_row = None
        self.col_widths = None

    def clear(self):
        """Reset history values"""
        self.values = defaultdict(list)
        self.n_row = None

    def update(self, **kwargs):
        """Append one row, ``n_row`` is the row number
        """
        self.n_row = kwargs["n_row"]
        for key, val in kwargs.items():
            self.values[key].append(val)

    def print_history(self):
        """Verbose for the current row of history regarding print_order
        """
        values = self.values
        print_order = [name for name in self.print_order if name in values]
        # If this is the first row, print the column names
        if self.n_row == 0 or self.col_widths is None:
            min_width = self.minimum_col_width
            names = [name.center(min_width) for name in print_order]
            self.col_widths = list(map(len, names))
            print(' | '.join(names))

        col_widths = self.col_widths
        print_style = self.print_style
        cells = []
        for i, name in enumerate(print_order):
            val = values[name][-1]
            if val is None:
                cell = "-"
            else:
                cell = print_style[name] % val
            width = col_widths[i] if i < len(col_widths) else 0
            cells.append(cell.rjust(width))
        print(' | '.join(cells))
