LINES = []


def record_criterion(label, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] {label}" + (f" -- {detail}" if detail else "")
    LINES.append(line)
    print(line)
    return passed
