"""
Excursions as rooted plane trees.

An excursion of length n over S corresponds to a plane tree with n + 1 nodes
whose outdegrees lie in {0} ∪ {b + 1 : b in S}. Reading the tree in preorder,
a node of outdegree d becomes a step of height d - 1; the last node (always a
leaf) gives a final down step that is dropped from the excursion.

Under this correspondence an r-ascent of the path is a node that is not a
leftmost child and whose chain of leftmost descendants has exactly r edges.

All traversals use explicit stacks, so trees of any depth are handled.

Text form: a node is "(" followed by its children and ")"; a leaf is "()".
"""

from collections.abc import Iterator, Sequence

from ascents.errors import IllegalOutdegree, InvalidInputError, MalformedTree, NotAnExcursion
from ascents.kind import PathKind
from ascents.sampler import LatticePath
from ascents.stepset import StepSet


class TreeNode:
    """A node with an ordered list of children."""

    __slots__ = ("children",)

    def __init__(self, children: list["TreeNode"] | None = None):
        self.children: list[TreeNode] = children if children is not None else []

    @property
    def outdegree(self) -> int:
        return len(self.children)

    def __repr__(self) -> str:
        return f"TreeNode(outdegree={self.outdegree})"


class PlaneTree:
    """
    A rooted plane tree.

    Two trees are equal when their preorder outdegree sequences agree, which
    determines an ordered tree completely.
    """

    def __init__(self, root: TreeNode):
        self.root = root

    def preorder(self) -> Iterator[TreeNode]:
        """Nodes in preorder."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def outdegrees(self) -> list[int]:
        """Outdegrees in preorder."""
        return [node.outdegree for node in self.preorder()]

    @property
    def node_count(self) -> int:
        return sum(1 for _ in self.preorder())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlaneTree):
            return NotImplemented
        return self.outdegrees() == other.outdegrees()

    def __hash__(self) -> int:
        return hash(tuple(self.outdegrees()))

    def __repr__(self) -> str:
        return f"PlaneTree({tree_to_text(self)!r})"


def _from_outdegrees(degrees: Sequence[int]) -> PlaneTree:
    root = TreeNode()
    # (node, children still to attach)
    pending: list[list] = [[root, degrees[0]]] if degrees[0] else []
    for degree in degrees[1:]:
        node = TreeNode()
        parent = pending[-1]
        parent[0].children.append(node)
        parent[1] -= 1
        if parent[1] == 0:
            pending.pop()
        if degree:
            pending.append([node, degree])
    return PlaneTree(root)


def _steps_of(path: LatticePath | Sequence[int]) -> tuple[int, ...]:
    if isinstance(path, LatticePath):
        if path.kind is not PathKind.EXCURSION:
            raise NotAnExcursion(f"Only excursions map to trees, got a {path.kind.value}")
        return path.steps
    return tuple(path)


def path_to_tree(step_set: StepSet, path: LatticePath | Sequence[int]) -> PlaneTree:
    """
    Build the plane tree of an excursion.

    The outdegrees in preorder are step + 1 for every step, followed by a leaf
    for the implicit final down step.

    Raises:
        NotAnExcursion: If the path uses a step outside S, goes below 0 or
            does not end at 0

    Examples:
        >>> from ascents.stepset import make_step_set
        >>> tree_to_text(path_to_tree(make_step_set([-1, 1]), [1, 1, -1, -1]))
        '((()())())'
    """
    steps = _steps_of(path)
    altitude = 0
    for i, step in enumerate(steps):
        if step not in step_set.steps:
            raise NotAnExcursion(f"Step {step} at position {i} is not in {step_set}")
        altitude += step
        if altitude < 0:
            raise NotAnExcursion(f"Path goes below 0 at position {i}")
    if altitude != 0:
        raise NotAnExcursion(f"Path ends at altitude {altitude}, not 0")

    return _from_outdegrees([step + 1 for step in steps] + [0])


def tree_to_path(step_set: StepSet, tree: PlaneTree) -> LatticePath:
    """
    Read an excursion off a plane tree; inverse of path_to_tree.

    Raises:
        IllegalOutdegree: If some outdegree is not 0 or b + 1 for b in S
    """
    allowed = {0} | {b + 1 for b in step_set.ups}
    degrees = tree.outdegrees()
    for degree in degrees:
        if degree not in allowed:
            raise IllegalOutdegree(
                f"Outdegree {degree} is not allowed over {step_set}; "
                f"allowed: {sorted(allowed)}"
            )
    return LatticePath(kind=PathKind.EXCURSION, steps=tuple(d - 1 for d in degrees[:-1]))


def tree_ascent_count(tree: PlaneTree, r: int) -> int:
    """
    Number of nodes that are not leftmost children and whose leftmost chain
    to a leaf has exactly r edges. The root counts as not leftmost.
    """
    if r < 1:
        raise InvalidInputError(f"Ascent length r must be at least 1, got {r}")

    # chains starting at different non-leftmost nodes are disjoint
    starts = [tree.root]
    for node in tree.preorder():
        starts.extend(node.children[1:])

    total = 0
    for start in starts:
        length = 0
        node = start
        while node.children:
            node = node.children[0]
            length += 1
        if length == r:
            total += 1
    return total


def tree_to_text(tree: PlaneTree) -> str:
    """Nested-parentheses text form."""
    parts: list[str] = []
    # None marks the end of a node's children
    stack: list[TreeNode | None] = [tree.root]
    while stack:
        node = stack.pop()
        if node is None:
            parts.append(")")
            continue
        parts.append("(")
        stack.append(None)
        stack.extend(reversed(node.children))
    return "".join(parts)


def tree_from_text(text: str) -> PlaneTree:
    """
    Parse the nested-parentheses form; whitespace is ignored.

    Raises:
        MalformedTree: On characters other than parentheses, unbalanced input
            or more than one root
    """
    body = "".join(text.split())
    if not body:
        raise MalformedTree("Empty tree text")

    root: TreeNode | None = None
    open_nodes: list[TreeNode] = []
    for i, char in enumerate(body):
        if char == "(":
            if root is not None and not open_nodes:
                raise MalformedTree(f"Second root at position {i}")
            node = TreeNode()
            if open_nodes:
                open_nodes[-1].children.append(node)
            else:
                root = node
            open_nodes.append(node)
        elif char == ")":
            if not open_nodes:
                raise MalformedTree(f"Unbalanced ')' at position {i}")
            open_nodes.pop()
        else:
            raise MalformedTree(f"Unexpected character {char!r} at position {i}")

    if open_nodes or root is None:
        raise MalformedTree("Unbalanced '(' in tree text")
    return PlaneTree(root)
