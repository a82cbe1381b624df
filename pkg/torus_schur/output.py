import csv


def write_csv(stdout, path, header, rows):
    """Rows to ``path``, or to the command's stdout when no path is given."""
    if path is None:
        writer = csv.writer(stdout, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
        return
    with open(path, 'w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)
    stdout.write(f'Wrote {len(rows)} rows to {path}')
