/* Minimal IPASIR library for tests: DPLL with unit propagation.
 * The terminate callback is polled once per conflict.  Cores are the full
 * assumption set.  Build with -DOMIT_SOLVE to drop ipasir_solve. */
#include <stdlib.h>
#include <string.h>

typedef struct {
    int *lits;
    int nlits, cap, closed;
    int *assumps;
    int nassumps, capa;
    int *solved;
    int nsolved;
    int maxvar;
    signed char *vals;
    int *trail;
    int ntrail;
    int status;
    int interrupted;
    void *term_data;
    int (*term)(void *);
} S;

static void grow(int **p, int *cap, int need) {
    if (need <= *cap) return;
    int c = *cap ? *cap : 16;
    while (c < need) c *= 2;
    *p = realloc(*p, sizeof(int) * c);
    *cap = c;
}

static void see(S *s, int lit) {
    int v = abs(lit);
    if (v > s->maxvar) {
        s->vals = realloc(s->vals, v + 1);
        memset(s->vals + s->maxvar + 1, 0, v - s->maxvar);
        s->trail = realloc(s->trail, sizeof(int) * (v + 1));
        s->maxvar = v;
    }
}

const char *ipasir_signature(void) { return "mini-dpll 1.0"; }

void *ipasir_init(void) {
    S *s = calloc(1, sizeof(S));
    s->vals = calloc(1, 1);
    s->trail = calloc(1, sizeof(int));
    return s;
}

void ipasir_release(void *p) {
    S *s = p;
    free(s->lits); free(s->assumps); free(s->solved); free(s->vals); free(s->trail);
    free(s);
}

void ipasir_add(void *p, int lit) {
    S *s = p;
    if (lit) see(s, lit);
    grow(&s->lits, &s->cap, s->nlits + 1);
    s->lits[s->nlits++] = lit;
    if (!lit) s->closed = s->nlits;
    s->status = 0;
}

void ipasir_assume(void *p, int lit) {
    S *s = p;
    see(s, lit);
    grow(&s->assumps, &s->capa, s->nassumps + 1);
    s->assumps[s->nassumps++] = lit;
    s->status = 0;
}

static int value(S *s, int lit) {
    int v = s->vals[abs(lit)];
    return lit > 0 ? v : -v;
}

static void assign(S *s, int lit) {
    s->vals[abs(lit)] = lit > 0 ? 1 : -1;
    s->trail[s->ntrail++] = abs(lit);
}

static void undo(S *s, int to) {
    while (s->ntrail > to) s->vals[s->trail[--s->ntrail]] = 0;
}

static int propagate(S *s) {
    int changed = 1;
    while (changed) {
        changed = 0;
        int i = 0;
        while (i < s->closed) {
            int sat = 0, open = 0, last = 0, j = i;
            for (; s->lits[j]; j++) {
                int v = value(s, s->lits[j]);
                if (v > 0) sat = 1;
                else if (v == 0) { open++; last = s->lits[j]; }
            }
            if (!sat) {
                if (!open) return 0;
                if (open == 1) { assign(s, last); changed = 1; }
            }
            i = j + 1;
        }
    }
    return 1;
}

static int conflict(S *s) {
    if (s->term && s->term(s->term_data)) s->interrupted = 1;
    return 0;
}

static int dpll(S *s) {
    if (!propagate(s)) return conflict(s);
    int v = 1;
    while (v <= s->maxvar && s->vals[v]) v++;
    if (v > s->maxvar) return 1;
    int mark = s->ntrail;
    for (int phase = 1; phase >= -1; phase -= 2) {
        assign(s, phase * v);
        if (dpll(s)) return 1;
        undo(s, mark);
        if (s->interrupted) return 0;
    }
    return 0;
}

#ifndef OMIT_SOLVE
int ipasir_solve(void *p) {
    S *s = p;
    int result;
    s->interrupted = 0;
    undo(s, 0);
    free(s->solved);
    s->solved = s->assumps;
    s->nsolved = s->nassumps;
    s->assumps = NULL;
    s->nassumps = s->capa = 0;
    int ok = 1;
    for (int i = 0; i < s->nsolved && ok; i++) {
        int v = value(s, s->solved[i]);
        if (v < 0) ok = 0;
        else if (v == 0) assign(s, s->solved[i]);
    }
    if (ok && dpll(s)) result = 10;
    else if (s->interrupted) result = 0;
    else result = 20;
    if (result != 10) undo(s, 0);
    s->status = result;
    return result;
}
#endif

int ipasir_val(void *p, int lit) {
    S *s = p;
    int v = abs(lit);
    if (v > s->maxvar || !s->vals[v]) return 0;
    return value(s, v) > 0 ? v : -v;
}

int ipasir_failed(void *p, int lit) {
    S *s = p;
    for (int i = 0; i < s->nsolved; i++)
        if (s->solved[i] == lit) return 1;
    return 0;
}

void ipasir_set_terminate(void *p, void *data, int (*term)(void *)) {
    S *s = p;
    s->term_data = data;
    s->term = term;
}

void ipasir_set_learn(void *p, void *data, int max_length, void (*learn)(void *, int *)) {
    (void)p; (void)data; (void)max_length; (void)learn;
}
