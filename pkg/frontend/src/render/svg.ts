// The only DOM-aware code: mounts a scene graph as SVG elements. Scene data
// fields land as data-* attributes so on-screen marks stay traceable to the
// payload values they encode.

import type { SceneNode } from "../scene.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function sceneToSvgElement(node: SceneNode, doc: Document): Element {
  const el = build(node, doc);
  applyCommon(node, el, doc);
  return el;
}

function build(node: SceneNode, doc: Document): Element {
  switch (node.kind) {
    case "group": {
      const g = doc.createElementNS(SVG_NS, "g");
      if (node.translate) g.setAttribute("transform", `translate(${node.translate[0]},${node.translate[1]})`);
      for (const child of node.children) g.appendChild(sceneToSvgElement(child, doc));
      return g;
    }
    case "rect": {
      const r = doc.createElementNS(SVG_NS, "rect");
      r.setAttribute("x", String(node.x));
      r.setAttribute("y", String(node.y));
      r.setAttribute("width", String(Math.max(0, node.width)));
      r.setAttribute("height", String(Math.max(0, node.height)));
      if (node.fill) r.setAttribute("fill", node.fill);
      return r;
    }
    case "circle": {
      const c = doc.createElementNS(SVG_NS, "circle");
      c.setAttribute("cx", String(node.cx));
      c.setAttribute("cy", String(node.cy));
      c.setAttribute("r", String(Math.max(0, node.r)));
      if (node.fill) c.setAttribute("fill", node.fill);
      if (node.stroke) c.setAttribute("stroke", node.stroke);
      return c;
    }
    case "line": {
      const l = doc.createElementNS(SVG_NS, "line");
      l.setAttribute("x1", String(node.x1));
      l.setAttribute("y1", String(node.y1));
      l.setAttribute("x2", String(node.x2));
      l.setAttribute("y2", String(node.y2));
      l.setAttribute("stroke", node.stroke ?? "#333");
      if (node.width) l.setAttribute("stroke-width", String(node.width));
      if (node.dash) l.setAttribute("stroke-dasharray", node.dash);
      return l;
    }
    case "polyline": {
      const p = doc.createElementNS(SVG_NS, node.closed ? "polygon" : "polyline");
      p.setAttribute("points", node.points.map(([x, y]) => `${x},${y}`).join(" "));
      p.setAttribute("fill", node.fill ?? "none");
      if (node.stroke) p.setAttribute("stroke", node.stroke);
      if (node.width) p.setAttribute("stroke-width", String(node.width));
      if (node.dash) p.setAttribute("stroke-dasharray", node.dash);
      return p;
    }
    case "path": {
      const p = doc.createElementNS(SVG_NS, "path");
      p.setAttribute("d", node.d);
      p.setAttribute("fill", node.fill ?? "none");
      if (node.stroke) p.setAttribute("stroke", node.stroke);
      return p;
    }
    case "text": {
      const t = doc.createElementNS(SVG_NS, "text");
      t.setAttribute("x", String(node.x));
      t.setAttribute("y", String(node.y));
      if (node.anchor) t.setAttribute("text-anchor", node.anchor);
      t.setAttribute("font-size", String(node.size ?? 11));
      t.textContent = node.text;
      return t;
    }
  }
}

function applyCommon(node: SceneNode, el: Element, doc: Document): void {
  if (node.cls) el.setAttribute("class", node.cls);
  if (node.data) {
    for (const [key, value] of Object.entries(node.data)) {
      if (value === null || value === undefined) continue;
      el.setAttribute(
        `data-${key.replace(/_/g, "-")}`,
        typeof value === "object" ? JSON.stringify(value) : String(value),
      );
    }
  }
  if (node.title) {
    const t = doc.createElementNS(SVG_NS, "title");
    t.textContent = node.title;
    el.appendChild(t);
  }
}

export function mount(root: Element, scene: SceneNode, width: number, height: number): SVGSVGElement {
  const doc = root.ownerDocument;
  const svg = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.appendChild(sceneToSvgElement(scene, doc));
  root.replaceChildren(svg);
  return svg;
}
