// A renderer-agnostic scene graph: views are pure functions from API payloads
// to these nodes, which makes every visual encoding assertable in node tests.
// The browser mounter in render/svg.ts is the only DOM-aware code.
export function group(children, extra = {}) {
    return { kind: "group", children, ...extra };
}
export function findAll(root, cls) {
    const out = [];
    const walk = (node) => {
        if (node.cls && node.cls.split(/\s+/).includes(cls))
            out.push(node);
        if (node.kind === "group")
            node.children.forEach(walk);
    };
    walk(root);
    return out;
}
export function findOne(root, cls) {
    const all = findAll(root, cls);
    if (all.length !== 1)
        throw new Error(`expected one .${cls}, found ${all.length}`);
    return all[0];
}
/** Absolute translation of a node (its own translate included) under
 * possibly nested groups. */
export function absoluteOffset(root, target) {
    let found = null;
    const walk = (node, dx, dy) => {
        const [tx, ty] = node.kind === "group" && node.translate ? node.translate : [0, 0];
        if (node === target) {
            found = [dx + tx, dy + ty];
            return;
        }
        if (node.kind === "group") {
            node.children.forEach((c) => walk(c, dx + tx, dy + ty));
        }
    };
    walk(root, 0, 0);
    if (!found)
        throw new Error("node not found in scene");
    return found;
}
