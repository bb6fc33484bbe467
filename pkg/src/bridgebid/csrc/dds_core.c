/* Double-dummy search core.
 *
 * A direct port of the pure-Python solver in dds.py: depth-first minimax
 * over tricks with alpha-beta pruning, a transposition table keyed on
 * rank-normalized positions, equivalence-class move collapsing, dominance
 * reduction for followers, a sure-trick cashing bound, and a trump-top-run
 * bound.  Exact values come from null-window probes around a binary
 * search.
 *
 * The state is process-global (one solve at a time per process); callers
 * parallelize across processes, never threads.
 *
 * Build: gcc -O2 -shared -fPIC -o dds_core.so dds_core.c
 */

#include <stdint.h>
#include <string.h>

#define NS(p) (((p) & 1) == 0)

/* ------------------------------------------------------------------ */
/* global search state                                                 */
/* ------------------------------------------------------------------ */

static uint16_t H[16];      /* hand masks, player*4 + suit, bit0 = deuce */
static int TRUMP;           /* -1 notrump, else suit 0..3 */
static int TOTAL;           /* tricks in the deal */
static int HIST[52];        /* history heuristic, suit*13 + rank */

#define TT_BITS 20
#define TT_SIZE (1u << TT_BITS)
#define TT_MASK (TT_SIZE - 1)
#define TT_MIN_TRICKS 2
#define NO_MOVE 0xff

typedef struct {
    uint32_t code[4];       /* per-suit owner sequences */
    uint32_t gen;           /* generation tag; entry valid iff == cur gen */
    int8_t lo, hi;
    uint8_t leader;
    uint8_t move;           /* suit*16 + class-index-from-top, or NO_MOVE */
    uint8_t depth;          /* tricks_left, used for replacement */
} Ent;

static Ent TT[TT_SIZE];
static uint32_t GEN = 0;

/* ------------------------------------------------------------------ */
/* helpers                                                             */
/* ------------------------------------------------------------------ */

static inline int bitlen(uint32_t x) { return 32 - __builtin_clz(x); }

/* class representatives: lowest card of each run of `mine` not broken by
 * a live blocker; written low-to-high into out, returns count */
static inline int reps_of(uint32_t mine, uint32_t blockers, int *out)
{
    int n = 0, in_run = 0;
    uint32_t scan = mine | blockers;
    while (scan) {
        uint32_t low = scan & (~scan + 1);
        if (mine & low) {
            if (!in_run) { out[n++] = bitlen(low) - 1; in_run = 1; }
        } else {
            in_run = 0;
        }
        scan ^= low;
    }
    return n;
}

/* ------------------------------------------------------------------ */
/* sure-trick cashing bound (see Python _sure_tricks for the argument) */
/* ------------------------------------------------------------------ */

static int sure_tricks(int leader, int need, int *first_suit, int *first_rank)
{
    int pd = (leader + 2) & 3, o1 = (leader + 1) & 3, o2 = (leader + 3) & 3;
    uint16_t mine[4], his[4], opp[4];
    int s, q = 0;
    *first_suit = -1;
    for (s = 0; s < 4; s++) {
        mine[s] = H[leader * 4 + s];
        his[s] = H[pd * 4 + s];
        opp[s] = H[o1 * 4 + s] | H[o2 * 4 + s];
    }
    while (q < need) {
        int took_s = -1, took_r = 0;
        int s_lo = 0, s_hi = 3;
        if (TRUMP >= 0 && opp[TRUMP]) { s_lo = s_hi = TRUMP; }
        for (s = s_lo; s <= s_hi; s++) {
            uint32_t m = mine[s], p = his[s];
            uint32_t alive, top;
            if (!m) continue;
            alive = m | p | opp[s];
            top = 1u << (bitlen(alive) - 1);
            if (m & top) {
                mine[s] = m ^ top;
                if (p) {
                    his[s] = p ^ (p & (~p + 1)); /* partner follows low */
                } else {
                    int only_trumps = 0;
                    if (TRUMP >= 0 && s != TRUMP && his[TRUMP]) {
                        int t;
                        only_trumps = 1;
                        for (t = 0; t < 4; t++)
                            if (t != TRUMP && his[t]) { only_trumps = 0; break; }
                    }
                    if (only_trumps) {
                        /* partner holds only trumps: the forced ruff wins
                         * the trick instead, moving the lead across */
                        uint16_t tmp[4];
                        his[TRUMP] ^= his[TRUMP] & (~his[TRUMP] + 1);
                        memcpy(tmp, mine, sizeof tmp);
                        memcpy(mine, his, sizeof tmp);
                        memcpy(his, tmp, sizeof tmp);
                    } else {
                        /* discard partner's lowest card */
                        int bs = -1, br = 99, t;
                        for (t = 0; t < 4; t++) {
                            uint32_t hm = his[t];
                            if (hm) {
                                int r = bitlen(hm & (~hm + 1)) - 1;
                                if (r < br) { br = r; bs = t; }
                            }
                        }
                        if (bs >= 0) his[bs] ^= 1u << br;
                    }
                }
                took_s = s; took_r = bitlen(top) - 1;
                break;
            }
            if (p & top) {
                uint16_t tmp[4];
                took_r = bitlen(m & (~m + 1)) - 1;
                mine[s] = m ^ (m & (~m + 1)); /* lead low to partner's top */
                his[s] = p ^ top;
                memcpy(tmp, mine, sizeof tmp);
                memcpy(mine, his, sizeof tmp);
                memcpy(his, tmp, sizeof tmp);
                took_s = s;
                break;
            }
        }
        if (took_s < 0) break;
        if (*first_suit < 0) { *first_suit = took_s; *first_rank = took_r; }
        q++;
    }
    return q;
}

/* ------------------------------------------------------------------ */
/* transposition table                                                 */
/* ------------------------------------------------------------------ */

static inline void make_codes(uint32_t *codes)
{
    int s;
    for (s = 0; s < 4; s++) {
        uint32_t m0 = H[s], m1 = H[4 + s], m2 = H[8 + s], m3 = H[12 + s];
        uint32_t alive = m0 | m1 | m2 | m3;
        uint32_t v = 1;
        while (alive) {
            uint32_t low = alive & (~alive + 1);
            alive ^= low;
            v <<= 2;
            if (m0 & low) ;
            else if (m1 & low) v += 1;
            else if (m2 & low) v += 2;
            else v += 3;
        }
        codes[s] = v;
    }
}

static inline uint32_t hash_codes(const uint32_t *c, int leader)
{
    uint64_t h = c[0];
    h = h * 0x9E3779B97F4A7C15ull + c[1];
    h = h * 0x9E3779B97F4A7C15ull + c[2];
    h = h * 0x9E3779B97F4A7C15ull + c[3];
    h = h * 0x9E3779B97F4A7C15ull + (uint64_t)leader;
    h ^= h >> 29; h *= 0xBF58476D1CE4E5B9ull; h ^= h >> 32;
    return (uint32_t)h & TT_MASK;
}

static inline Ent *tt_find(const uint32_t *codes, int leader)
{
    uint32_t idx = hash_codes(codes, leader);
    int probes;
    for (probes = 0; probes < 8; probes++) {
        Ent *e = &TT[(idx + probes) & TT_MASK];
        if (e->gen != GEN) return 0;
        if (e->leader == leader && e->code[0] == codes[0] &&
            e->code[1] == codes[1] && e->code[2] == codes[2] &&
            e->code[3] == codes[3])
            return e;
    }
    return 0;
}

static inline Ent *tt_slot(const uint32_t *codes, int leader, int depth)
{
    uint32_t idx = hash_codes(codes, leader);
    Ent *victim = &TT[idx & TT_MASK];
    int probes;
    for (probes = 0; probes < 8; probes++) {
        Ent *e = &TT[(idx + probes) & TT_MASK];
        if (e->gen != GEN) return e;
        if (e->leader == leader && e->code[0] == codes[0] &&
            e->code[1] == codes[1] && e->code[2] == codes[2] &&
            e->code[3] == codes[3])
            return e;
        if (e->depth < victim->depth) victim = e;
    }
    return victim->depth <= depth ? victim : 0;
}

/* ------------------------------------------------------------------ */
/* search                                                              */
/* ------------------------------------------------------------------ */

static int search_future(int leader, int alpha, int beta, int tricks_left);

typedef struct { int key; int suit; int rank; } Move;

static inline void sort_moves(Move *mv, int n)
{
    int i, j;
    for (i = 1; i < n; i++) {
        Move m = mv[i];
        for (j = i - 1; j >= 0 && mv[j].key > m.key; j--) mv[j + 1] = mv[j];
        mv[j + 1] = m;
    }
}

/* in-trick search for players 2..4; see the Python _follow docstring for
 * the dominance argument that shapes the candidate sets */
static int search_follow(int player, int leader, int led, int win_p,
                         int win_s, int win_r, int alpha, int beta,
                         int tricks_left, const uint32_t *alive_ts)
{
    int base = player * 4;
    int last = ((player - leader) & 3) == 3;
    int nxt = (player + 1) & 3;
    Move moves[16];
    int nm = 0;
    uint32_t mine = H[base + led];
    int reps[13], nr, i;

    if (mine) {
        uint32_t blockers = alive_ts[led] & ~mine;
        int first_win;
        nr = reps_of(mine, blockers, reps);
        if (led == TRUMP && win_s != TRUMP) {
            first_win = 0;
        } else if (led == win_s) {
            first_win = nr;
            for (i = 0; i < nr; i++)
                if (reps[i] > win_r) { first_win = i; break; }
        } else {
            first_win = nr;
        }
        if (first_win < nr) {
            if (last) {
                moves[nm].key = 0; moves[nm].suit = led;
                moves[nm++].rank = reps[first_win];
            } else {
                for (i = first_win; i < nr; i++) {
                    moves[nm].key = reps[i]; moves[nm].suit = led;
                    moves[nm++].rank = reps[i];
                }
            }
        }
        if (first_win > 0) {
            moves[nm].key = 14; moves[nm].suit = led;
            moves[nm++].rank = reps[0];
        }
    } else {
        if (TRUMP >= 0 && H[base + TRUMP]) {
            uint32_t tmine = H[base + TRUMP];
            uint32_t blockers = alive_ts[TRUMP] & ~tmine;
            nr = reps_of(tmine, blockers, reps);
            for (i = 0; i < nr; i++) {
                if (win_s == TRUMP && reps[i] <= win_r) continue;
                moves[nm].key = reps[i]; moves[nm].suit = TRUMP;
                moves[nm++].rank = reps[i];
                if (last) break;
            }
        }
        for (int s = 0; s < 4; s++) {
            uint32_t m2 = H[base + s];
            uint32_t blockers;
            int low;
            if (!m2) continue;
            blockers = alive_ts[s] & ~m2;
            {
                int tmp[13];
                reps_of(m2, blockers, tmp);
                low = tmp[0];
            }
            if (s == TRUMP && (win_s != TRUMP || low > win_r))
                continue; /* a winning ruff, covered above */
            moves[nm].key = 16 + low; moves[nm].suit = s;
            moves[nm++].rank = low;
        }
    }
    if (nm > 1) sort_moves(moves, nm);

    {
        int maximizing = NS(player);
        int best = maximizing ? -1 : tricks_left + 1;
        for (i = 0; i < nm; i++) {
            int s = moves[i].suit, r = moves[i].rank;
            int n_p, n_s, n_r, v;
            if ((s == win_s && r > win_r) || (s == TRUMP && win_s != TRUMP)) {
                n_p = player; n_s = s; n_r = r;
            } else {
                n_p = win_p; n_s = win_s; n_r = win_r;
            }
            H[base + s] ^= 1u << r;
            if (last) {
                int inc = NS(n_p) ? 1 : 0;
                if (tricks_left == 1)
                    v = inc;
                else
                    v = inc + search_future(n_p, alpha - inc, beta - inc,
                                            tricks_left - 1);
            } else {
                v = search_follow(nxt, leader, led, n_p, n_s, n_r,
                                  alpha, beta, tricks_left, alive_ts);
            }
            H[base + s] ^= 1u << r;
            if (maximizing) {
                if (v > best) {
                    best = v;
                    if (v > alpha) {
                        if (v >= beta) { HIST[s * 13 + r] += tricks_left; return v; }
                        alpha = v;
                    }
                }
            } else {
                if (v < best) {
                    best = v;
                    if (v < beta) {
                        if (v <= alpha) { HIST[s * 13 + r] += tricks_left; return v; }
                        beta = v;
                    }
                }
            }
        }
        return best;
    }
}

/* leader's choices for one trick; *out_move receives suit*16+class-from-top
 * of the move that produced the value, or NO_MOVE on fail-low */
static int search_lead(int leader, int alpha, int beta, int tricks_left,
                       int tt_move, int sim_suit, int sim_rank, int *out_move,
                       const uint32_t *alive_ts)
{
    int base = leader * 4;
    int pd_base = ((leader + 2) & 3) * 4;
    Move moves[16];
    int reps_store[4][13];
    int reps_n[4] = {0, 0, 0, 0};
    int nm = 0, s, i;

    for (s = 0; s < 4; s++) {
        uint32_t mine = H[base + s];
        uint32_t all, blockers, top;
        int pri;
        if (!mine) continue;
        all = alive_ts[s];
        blockers = all & ~mine;
        reps_n[s] = reps_of(mine, blockers, reps_store[s]);
        top = 1u << (bitlen(all) - 1);
        if (H[pd_base + s] & top)
            pri = 0;            /* lead towards the partner's winner */
        else if (mine & top)
            pri = (s != TRUMP) ? 2 : 1;
        else
            pri = 3;
        for (i = 0; i < reps_n[s]; i++) {
            int r = reps_store[s][i];
            int hv = HIST[s * 13 + r];
            if (hv > 0xffff) hv = 0xffff;
            moves[nm].key = (pri << 21) | ((0xffff - hv) << 5) | (12 - r);
            moves[nm].suit = s; moves[nm++].rank = r;
        }
    }
    if (nm > 1) {
        int front_s = -1, front_r = 0;
        sort_moves(moves, nm);
        if (tt_move != NO_MOVE) {
            int ts = tt_move >> 4, ti = tt_move & 15;
            if (ti < reps_n[ts]) {
                front_s = ts;
                front_r = reps_store[ts][reps_n[ts] - 1 - ti];
            }
        }
        if (front_s < 0 && sim_suit >= 0 && reps_n[sim_suit]) {
            /* map the sim's card onto its equivalence class */
            int cls = -1;
            for (i = 0; i < reps_n[sim_suit]; i++) {
                if (reps_store[sim_suit][i] <= sim_rank)
                    cls = reps_store[sim_suit][i];
                else break;
            }
            if (cls >= 0) { front_s = sim_suit; front_r = cls; }
        }
        if (front_s >= 0) {
            for (i = 0; i < nm; i++) {
                if (moves[i].suit == front_s && moves[i].rank == front_r) {
                    Move m = moves[i];
                    memmove(moves + 1, moves, i * sizeof(Move));
                    moves[0] = m;
                    break;
                }
            }
        }
    }

    {
        int maximizing = NS(leader);
        int best = maximizing ? -1 : tricks_left + 1;
        int best_s = -1, best_r = 0;
        int nxt = (leader + 1) & 3;
        int ok;
        for (i = 0; i < nm; i++) {
            int s2 = moves[i].suit, r = moves[i].rank, v;
            H[base + s2] ^= 1u << r;
            v = search_follow(nxt, leader, s2, leader, s2, r,
                              alpha, beta, tricks_left, alive_ts);
            H[base + s2] ^= 1u << r;
            if (maximizing) {
                if (v > best) {
                    best = v; best_s = s2; best_r = r;
                    if (v > alpha) {
                        if (v >= beta) {
                            HIST[s2 * 13 + r] += tricks_left * tricks_left;
                            goto done;
                        }
                        alpha = v;
                    }
                }
            } else {
                if (v < best) {
                    best = v; best_s = s2; best_r = r;
                    if (v < beta) {
                        if (v <= alpha) {
                            HIST[s2 * 13 + r] += tricks_left * tricks_left;
                            goto done;
                        }
                        beta = v;
                    }
                }
            }
        }
        ok = maximizing ? (best > alpha) : (best < beta);
        if (!ok) { *out_move = NO_MOVE; return best; }
done:
        /* normalize to (suit-slot, class-index-from-top) */
        *out_move = NO_MOVE;
        for (i = 0; i < reps_n[best_s]; i++) {
            if (reps_store[best_s][reps_n[best_s] - 1 - i] == best_r) {
                *out_move = (best_s << 4) | i;
                break;
            }
        }
        return best;
    }
}

static long NODES_FWD;
static int search_future(int leader, int alpha, int beta, int tricks_left)
{
    int use_tt, lo = 0, hi = tricks_left, tt_move = NO_MOVE;
    NODES_FWD++;
    uint32_t codes[4];
    int q, sim_suit, sim_rank = 0, v, move, ns_leads;

    if (tricks_left == 1) {
        int win_p = -1, win_s = -1, win_r = -1, p = leader, k, s;
        for (k = 0; k < 4; k++) {
            int base = p * 4;
            for (s = 0; s < 4; s++) {
                int r = H[base + s];
                if (r) {
                    if (win_p < 0) { win_p = p; win_s = s; win_r = r; }
                    else if ((s == win_s && r > win_r) ||
                             (s == TRUMP && win_s != TRUMP)) {
                        win_p = p; win_s = s; win_r = r;
                    }
                    break;
                }
            }
            p = (p + 1) & 3;
        }
        return NS(win_p) ? 1 : 0;
    }

    if (TRUMP >= 0) {
        /* a hand's top run of live trumps wins no matter who leads */
        uint32_t a0 = H[TRUMP], a1 = H[4 + TRUMP];
        uint32_t a2 = H[8 + TRUMP], a3 = H[12 + TRUMP];
        uint32_t alive = a0 | a1 | a2 | a3;
        if (alive) {
            uint32_t bit = 1u << (bitlen(alive) - 1);
            uint32_t own;
            int g = 0, ns_side;
            if (bit & a0) { own = a0; ns_side = 1; }
            else if (bit & a2) { own = a2; ns_side = 1; }
            else if (bit & a1) { own = a1; ns_side = 0; }
            else { own = a3; ns_side = 0; }
            while (bit & own) {
                g++;
                alive ^= bit;
                if (!alive) break;
                bit = 1u << (bitlen(alive) - 1);
            }
            if (ns_side) {
                if (g >= beta) return g;
                if (g > alpha) alpha = g;
            } else {
                int u = tricks_left - g;
                if (u <= alpha) return u;
                if (u < beta) beta = u;
            }
        }
    }

    use_tt = tricks_left >= TT_MIN_TRICKS;
    if (use_tt) {
        Ent *e;
        make_codes(codes);
        e = tt_find(codes, leader);
        if (e) {
            lo = e->lo; hi = e->hi; tt_move = e->move;
            if (lo >= beta) return lo;
            if (hi <= alpha) return hi;
            if (lo == hi) return lo;
            if (lo > alpha) alpha = lo;
            if (hi < beta) beta = hi;
        }
    }

    ns_leads = NS(leader);
    q = sure_tricks(leader, ns_leads ? beta : tricks_left - alpha,
                    &sim_suit, &sim_rank);
    if (ns_leads) {
        if (q >= beta) {
            if (use_tt && q > lo) {
                Ent *e = tt_slot(codes, leader, tricks_left);
                if (e) {
                    e->code[0] = codes[0]; e->code[1] = codes[1];
                    e->code[2] = codes[2]; e->code[3] = codes[3];
                    e->gen = GEN; e->leader = leader; e->depth = tricks_left;
                    e->lo = q; e->hi = hi; e->move = tt_move;
                }
            }
            return q;
        }
        if (q >= tricks_left) return tricks_left;
        if (q > lo) { lo = q; if (q > alpha) alpha = q; }
    } else {
        int u = tricks_left - q;
        if (u <= alpha) {
            if (use_tt && u < hi) {
                Ent *e = tt_slot(codes, leader, tricks_left);
                if (e) {
                    e->code[0] = codes[0]; e->code[1] = codes[1];
                    e->code[2] = codes[2]; e->code[3] = codes[3];
                    e->gen = GEN; e->leader = leader; e->depth = tricks_left;
                    e->lo = lo; e->hi = u; e->move = tt_move;
                }
            }
            return u;
        }
        if (q >= tricks_left) return 0;
        if (u < hi) { hi = u; if (u < beta) beta = u; }
    }

    {
        uint32_t alive_ts[4];
        int s;
        for (s = 0; s < 4; s++)
            alive_ts[s] = H[s] | H[4 + s] | H[8 + s] | H[12 + s];
        v = search_lead(leader, alpha, beta, tricks_left, tt_move,
                        sim_suit, sim_rank, &move, alive_ts);
    }

    if (use_tt) {
        Ent *e = tt_find(codes, leader);
        int old_move = e ? e->move : NO_MOVE;
        int nlo = e ? e->lo : 0, nhi = e ? e->hi : tricks_left;
        if (v <= alpha) { if (v < nhi) nhi = v; }
        else if (v >= beta) { if (v > nlo) nlo = v; }
        else { nlo = nhi = v; }
        if (!e) e = tt_slot(codes, leader, tricks_left);
        if (e) {
            e->code[0] = codes[0]; e->code[1] = codes[1];
            e->code[2] = codes[2]; e->code[3] = codes[3];
            e->gen = GEN; e->leader = leader; e->depth = tricks_left;
            e->lo = nlo; e->hi = nhi;
            e->move = (move == NO_MOVE) ? old_move : move;
        }
    }
    return v;
}

/* ------------------------------------------------------------------ */
/* exported API                                                        */
/* ------------------------------------------------------------------ */

static void load_deal(const uint64_t *hands, int trump)
{
    int p, s;
    for (p = 0; p < 4; p++)
        for (s = 0; s < 4; s++)
            H[p * 4 + s] = (hands[p] >> (13 * s)) & 0x1fff;
    TRUMP = trump;
    TOTAL = __builtin_popcountll(hands[0]);
    memset(HIST, 0, sizeof HIST);
    GEN++;
    if (GEN == 0) { memset(TT, 0, sizeof TT); GEN = 1; }
}

static int ns_tricks(int leader, int lo, int hi, int guess)
{
    while (lo < hi) {
        int mid, v, i;
        if (guess > lo && guess <= hi) { mid = guess; guess = -1; }
        else mid = (lo + hi + 1) / 2;
        for (i = 0; i < 52; i++) HIST[i] >>= 1;
        v = search_future(leader, mid - 1, mid, TOTAL);
        if (v >= mid) lo = v; else hi = v;
    }
    return lo;
}

/* exact North-South tricks; hands are 52-bit masks N,E,S,W; trump -1..3 */
int dd_ns_tricks(const uint64_t *hands, int trump, int leader, int guess)
{
    load_deal(hands, trump);
    return ns_tricks(leader, 0, TOTAL, guess);
}

/* best-declarer tricks: max of North-declared (East leads) and
 * South-declared (West leads), sharing one transposition table.
 * hint: expected count (e.g. previous sample's), or -1 */
int dd_best_declarer(const uint64_t *hands, int trump, int hint)
{
    int v_east, total;
    load_deal(hands, trump);
    total = TOTAL;
    if (hint >= 0 && hint <= total) {
        if (search_future(1, hint - 1, hint, total) >= hint) {
            if (hint == total ||
                search_future(1, hint, hint + 1, total) < hint + 1)
                v_east = hint;
            else
                v_east = ns_tricks(1, hint + 1, total, -1);
        } else {
            v_east = ns_tricks(1, 0, hint - 1, -1);
        }
    } else {
        v_east = ns_tricks(1, 0, total, -1);
    }
    if (v_east >= total) return v_east;
    if (search_future(3, v_east, v_east + 1, total) >= v_east + 1)
        return ns_tricks(3, v_east + 1, total, -1);
    return v_east;
}

/* instrumentation for tuning */
long dd_node_count(void) { return NODES_FWD; }
void dd_reset_nodes(void) { NODES_FWD = 0; }
