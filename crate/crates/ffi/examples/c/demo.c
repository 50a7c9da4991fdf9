#include <stdio.h>
#include "graphk.h"

static int check(GkStatus s, const char *what) {
    if (s != GK_STATUS_OK) {
        fprintf(stderr, "%s failed (%d): %s\n", what, (int)s, gk_last_error());
        return 1;
    }
    return 0;
}

int main(void) {
    GkTable *table = NULL;
    GkGraph *g = NULL;
    GkNbdm r;
    double log2_order;
    size_t orbits, bytes;

    if (check(gk_table_builtin(&table), "table")) return 1;
    if (check(gk_graph_generate("{\"family\":\"wheel\",\"n\":18,\"seed\":0}", &g), "generate")) return 1;
    if (check(gk_nbdm(g, table, 10, 7, &r), "nbdm")) return 1;
    if (check(gk_aut(g, &log2_order, &orbits), "aut")) return 1;
    if (check(gk_compressed_length(g, 9, &bytes), "deflate")) return 1;
    printf("version %s\n", gk_version());
    printf("side %zu\n", gk_table_side(table));
    printf("edges %zu\n", gk_graph_edge_count(g));
    printf("aut %.0f orbits %zu\n", log2_order * 1000, orbits);
    printf("nbdm_in_range %d\n", r.normalized >= 0.0 && r.normalized <= 1.0);

    GkStatus bad = gk_graph_add_edge(g, 0, 99);
    printf("bad_edge %d %s\n", (int)bad, gk_last_error());

    gk_graph_free(g);
    gk_table_free(table);
    return 0;
}
