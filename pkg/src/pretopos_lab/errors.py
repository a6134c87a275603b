"""Exception hierarchy shared by every module."""


class PretoposError(Exception):
    """Base class for all errors raised by pretopos_lab."""


class OutOfRange(PretoposError):
    def __init__(self, position, value, bound):
        self.position, self.value, self.bound = position, value, bound
        super().__init__(f"table entry {value} at position {position} is not < {bound}")


class LengthMismatch(PretoposError):
    def __init__(self, got, expected):
        self.got, self.expected = got, expected
        super().__init__(f"table has length {got}, domain has size {expected}")


class CompositionMismatch(PretoposError):
    pass


class ParallelMismatch(PretoposError):
    pass


class DomainMismatch(PretoposError):
    pass


class NonCommuting(PretoposError):
    def __init__(self, element, via_top, via_left):
        self.element = element
        super().__init__(
            f"square does not commute at {element}: right∘top gives {via_top}, bottom∘left gives {via_left}"
        )


class CapExceeded(PretoposError):
    def __init__(self, count, cap):
        self.count, self.cap = count, cap
        super().__init__(f"enumeration of {count} candidates exceeds cap {cap}")


class NotEquivalenceRelation(PretoposError):
    pass


class NotPreserving(PretoposError):
    def __init__(self, x, y):
        self.pair = (x, y)
        super().__init__(f"related pair ({x}, {y}) is sent to an unrelated pair")


class NotTotal(PretoposError):
    def __init__(self, row):
        self.row = row
        super().__init__(f"row {row} has no related element")


class NotUnique(PretoposError):
    def __init__(self, row):
        self.row = row
        super().__init__(f"row {row} has more than one related element")


class NotMono(PretoposError):
    pass


class NotSurjective(PretoposError):
    pass


class FiberBoundExceeded(PretoposError):
    def __init__(self, element, size, bound):
        self.element, self.size, self.bound = element, size, bound
        super().__init__(f"fiber over {element} has {size} elements, bound is {bound}")
