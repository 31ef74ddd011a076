/** Map pane: beads on a time-by-location plane.
 *
 * x is the bead timestamp scaled by the slider factor, y is its location
 * lane (one row per file/class/method). Beads are filled with their
 * cluster's color; a rounded outline groups each cluster. Clicking a bead
 * selects its cluster, shift-click adds to the selection.
 */
const SVG_NS = "http://www.w3.org/2000/svg";
const LABEL_WIDTH = 190;
const ROW_HEIGHT = 34;
const TOP_PAD = 18;
const BEAD_RADIUS = 9;
function svgEl(tag, attrs) {
    const el = document.createElementNS(SVG_NS, tag);
    for (const [k, v] of Object.entries(attrs)) {
        el.setAttribute(k, v);
    }
    return el;
}
export function beadX(ts, t0, timeScale) {
    return LABEL_WIDTH + 20 + (ts - t0) * timeScale;
}
export function beadY(lane) {
    return TOP_PAD + lane * ROW_HEIGHT + ROW_HEIGHT / 2;
}
export function renderMap(session, view, handlers) {
    const beads = session.beads;
    const colorOf = new Map(session.clusters.map((c) => [c.id, c.color]));
    const selected = new Set(view.selected);
    const t0 = beads.length ? Math.min(...beads.map((b) => b.ts)) : 0;
    const lanes = new Map();
    for (const b of beads) {
        if (!lanes.has(b.y)) {
            lanes.set(b.y, b.lane_label);
        }
    }
    const laneCount = lanes.size;
    const maxX = beads.length
        ? Math.max(...beads.map((b) => beadX(b.ts, t0, view.timeScale)))
        : LABEL_WIDTH;
    const width = Math.ceil(maxX + 40);
    const height = TOP_PAD * 2 + Math.max(laneCount, 1) * ROW_HEIGHT;
    const svg = svgEl("svg", {
        width: String(width),
        height: String(height),
        viewBox: `0 0 ${width} ${height}`,
        class: "bead-map",
    });
    for (const [lane, label] of [...lanes.entries()].sort((a, b) => a[0] - b[0])) {
        const y = beadY(lane);
        svg.appendChild(svgEl("line", {
            x1: String(LABEL_WIDTH + 6),
            y1: String(y),
            x2: String(width - 8),
            y2: String(y),
            class: "lane-guide",
        }));
        const text = svgEl("text", {
            x: String(LABEL_WIDTH),
            y: String(y + 4),
            "text-anchor": "end",
            class: "lane-label",
        });
        text.textContent = label;
        svg.appendChild(text);
    }
    // cluster outlines under the beads
    for (const cluster of session.clusters) {
        const members = beads.filter((b) => b.cluster_id === cluster.id);
        if (!members.length) {
            continue;
        }
        const xs = members.map((b) => beadX(b.ts, t0, view.timeScale));
        const ys = members.map((b) => beadY(b.y));
        const pad = BEAD_RADIUS + 5;
        const rect = svgEl("rect", {
            x: String(Math.min(...xs) - pad),
            y: String(Math.min(...ys) - pad),
            width: String(Math.max(...xs) - Math.min(...xs) + 2 * pad),
            height: String(Math.max(...ys) - Math.min(...ys) + 2 * pad),
            rx: String(BEAD_RADIUS + 3),
            class: selected.has(cluster.id) ? "cluster-hull selected" : "cluster-hull",
            stroke: cluster.color,
            "data-cluster-id": cluster.id,
        });
        svg.appendChild(rect);
    }
    for (const bead of beads) {
        const circle = svgEl("circle", {
            cx: String(beadX(bead.ts, t0, view.timeScale)),
            cy: String(beadY(bead.y)),
            r: String(BEAD_RADIUS),
            fill: colorOf.get(bead.cluster_id) ?? "#888888",
            class: selected.has(bead.cluster_id) ? "bead selected" : "bead",
            "data-bead-id": bead.id,
            "data-cluster-id": bead.cluster_id,
        });
        const title = svgEl("title", {});
        title.textContent = `#${bead.seq + 1} ${bead.lane_label}`;
        circle.appendChild(title);
        circle.addEventListener("click", (evt) => {
            handlers.onBeadClick(bead.id, evt.shiftKey);
        });
        circle.addEventListener("mouseenter", () => handlers.onHover(bead.id));
        circle.addEventListener("mouseleave", () => handlers.onHover(null));
        svg.appendChild(circle);
    }
    return svg;
}
