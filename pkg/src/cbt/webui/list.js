/** List pane: details of the beads in the selected clusters. Clicking a
 * row toggles that bead in the pending split selection. */
function fmtTime(ts) {
    return new Date(ts * 1000).toISOString().replace("T", " ").slice(0, 19);
}
function shortName(qualified) {
    if (!qualified) {
        return "";
    }
    const paren = qualified.indexOf("(");
    const head = paren >= 0 ? qualified.slice(0, paren) : qualified;
    const parts = head.split(".");
    const tail = parts.slice(-2).join(".");
    return paren >= 0 ? tail + qualified.slice(paren) : tail;
}
export function renderList(session, view, handlers) {
    const container = document.createElement("div");
    container.className = "bead-list";
    if (view.selected.length === 0) {
        const empty = document.createElement("p");
        empty.className = "placeholder";
        empty.textContent = "Select clusters in the map to list their changes.";
        container.appendChild(empty);
        return container;
    }
    const colorOf = new Map(session.clusters.map((c) => [c.id, c.color]));
    const selected = new Set(view.selected);
    const pending = new Set(view.pendingSplit);
    const table = document.createElement("table");
    const head = document.createElement("tr");
    for (const col of ["", "#", "time", "class", "method", "file"]) {
        const th = document.createElement("th");
        th.textContent = col;
        head.appendChild(th);
    }
    table.appendChild(head);
    for (const bead of session.beads) {
        if (!selected.has(bead.cluster_id)) {
            continue;
        }
        const tr = document.createElement("tr");
        tr.dataset.beadId = bead.id;
        tr.className = pending.has(bead.id) ? "bead-row pending" : "bead-row";
        const chipCell = document.createElement("td");
        const chip = document.createElement("span");
        chip.className = "chip";
        chip.style.backgroundColor = colorOf.get(bead.cluster_id) ?? "#888888";
        chip.title = bead.cluster_id;
        chipCell.appendChild(chip);
        tr.appendChild(chipCell);
        for (const text of [
            String(bead.seq + 1),
            fmtTime(bead.ts),
            shortName(bead.enclosing_class),
            shortName(bead.enclosing_method),
            bead.file,
        ]) {
            const td = document.createElement("td");
            td.textContent = text;
            tr.appendChild(td);
        }
        tr.addEventListener("click", () => handlers.onRowClick(bead.id));
        table.appendChild(tr);
    }
    container.appendChild(table);
    return container;
}
